"""Regenerate the bundled conductor <= 150 curve fixture.

Needs cypari and an unpacked copy of PARI's ``elldata`` package (Cremona's
tables); neither is a runtime dependency of bsdtwist.

    python scripts/make_fixture.py /path/to/elldata/ell0 > src/bsdtwist/data/cond150.jsonl

Only the optimal curve of each isogeny class is emitted (Cremona label
ending in 1).  Their Manin constant is 1 by Cremona's verification of the
database; rank is the number of stored generators.
"""
import json
import re
import sys

from cypari import pari


def main(path, bound=150):
    pari.allocatemem(2 * 10**9, silent=True)
    table = pari(open(path).read())
    for cls in table:
        N = int(cls[0])
        if N > bound:
            break
        for rec in list(cls)[1:]:
            label = str(rec[0]).strip('"')
            if not re.fullmatch(r"\d+[a-z]+1", label):
                continue
            ainvs = [int(a) for a in rec[1]]
            E = pari.ellinit(ainvs)
            tors = [int(t) for t in pari.elltors(E)[1]]
            degs = set()
            for x in pari.ellisomat(E)[1][0]:
                x = int(x)
                if x > 1:
                    degs.update(int(q) for q in pari.factor(x)[0])
            row = {
                "label": label,
                "ainvs": ainvs,
                "conductor": N,
                "rank": len(rec[2]),
                "torsion": sorted(tors),
                "optimal": True,
                "manin_constant": 1,
                "isogeny_degrees": sorted(degs),
            }
            print(json.dumps(row, separators=(", ", ": ")))


if __name__ == "__main__":
    main(sys.argv[1])
