"""Run the verification suites for several fields and write one JSON report per field.

    python3 scripts/run_verification.py --fields 3,1 5,1 --out reports/
"""

import argparse
import json
import time
from pathlib import Path

from metaplectic_modp.config import RunConfig
from metaplectic_modp.verify import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fields", nargs="+", default=["3,1", "5,1"], help="p,f pairs")
    ap.add_argument("--suites", nargs="+", choices=SUITES, default=list(SUITES))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    ok = True
    for spec in args.fields:
        p, f = (int(x) for x in spec.split(","))
        cfg = RunConfig(p=p, f=f, seed=args.seed, depth=args.depth)
        results = []
        for name in args.suites:
            t0 = time.perf_counter()
            res = run_suite(name, cfg)
            print(f"p={p} f={f} {res.line()} ({time.perf_counter() - t0:.1f}s)")
            results.append(res.to_json())
            ok &= res.passed
        path = args.out / f"verify_p{p}_f{f}.json"
        path.write_text(json.dumps({"config": cfg.to_json(), "suites": results}, indent=2, sort_keys=True))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
