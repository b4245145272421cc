"""Plain-text matrix files.

Format shared by all CLI subcommands: the first line holds the two
dimensions (``n p``, or ``n n`` for dissimilarity matrices), each following
line one row of whitespace-separated entries written with 17 significant
digits so float64 values round-trip exactly.
"""

import numpy as np

from .validation import check_array_2d


def write_matrix(path, A):
    A = check_array_2d(A, "matrix")
    n, p = A.shape
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{n} {p}\n")
        for row in A:
            fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def read_matrix(path):
    with open(path, "r", encoding="ascii") as fh:
        first = fh.readline().split()
        if len(first) != 2:
            raise ValueError(f"{path}: expected 'n p' on the first line")
        n, p = int(first[0]), int(first[1])
        data = np.loadtxt(fh, ndmin=2)
    if data.shape != (n, p):
        raise ValueError(f"{path}: header says {n}x{p} but body is {data.shape}")
    return data
