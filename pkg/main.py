"""
Main entry point for the class-U coefficient toolkit.

Usage:
    python main.py certify --aux f1
    python main.py koebe --theta 0.7 --spec K:5,1
    python main.py search --spec GZ:2,3 --restarts 50 --iters 500 --out runs/gz23.jsonl
"""
import os
import sys

# One BLAS/OpenMP thread keeps the series solves summing in a fixed order.
# These must be set before the first numpy import to take effect.
for _variable in ('OMP_NUM_THREADS', 'MKL_NUM_THREADS', 'OPENBLAS_NUM_THREADS'):
    os.environ[_variable] = '1'

from src.zalcman.cli import main  # noqa: E402


if __name__ == '__main__':
    sys.exit(main())
