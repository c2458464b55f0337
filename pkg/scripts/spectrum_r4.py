"""Value distribution at r = 4 (n = 12) via the reduced sum; brute force is out of reach here."""

from ternxc.spectrum import WeilParams, audit, closed_form_table, full_spectrum, moment_check
from ternxc.tower import Case

if __name__ == "__main__":
    for case in Case:
        rep = full_spectrum(WeilParams(4, case), "reduced")
        mc = moment_check(rep)
        res = audit(rep, closed_form_table(4, case, "moment_consistent"))
        print(f"case {case.value} d={rep.params.d} {rep.elapsed:.1f}s")
        for s, c in sorted(rep.counts.items()):
            print(f"  S={s:>6}  count={c}")
        print(f"  moments ok: {mc.passed}  moment-consistent table: {res.verdict}")
