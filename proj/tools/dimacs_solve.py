#!/usr/bin/env python3
"""Solve DIMACS CNF files with CaDiCaL (python-sat) and print the verdict in
SAT-competition output format: an "s" line and, when satisfiable, "v" lines.

Several files may be given; each answer is preceded by "c file PATH".
"""
import sys

from pysat.formula import CNF
from pysat.solvers import Cadical153


def solve(path):
    cnf = CNF(from_file=path)
    with Cadical153(bootstrap_with=cnf.clauses) as solver:
        if not solver.solve():
            return False, []
        return True, solver.get_model() or []


def main(argv):
    if len(argv) < 2:
        print("usage: dimacs_solve.py FILE.cnf [FILE.cnf ...]", file=sys.stderr)
        return 3
    for path in argv[1:]:
        if len(argv) > 2:
            print(f"c file {path}")
        sat, model = solve(path)
        if not sat:
            print("s UNSATISFIABLE")
            continue
        print("s SATISFIABLE")
        for i in range(0, len(model), 20):
            print("v " + " ".join(str(x) for x in model[i:i + 20]))
        print("v 0")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
