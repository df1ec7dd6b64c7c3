#!/usr/bin/env python3
"""Download the public SocioPatterns co-presence datasets.

The datasets are not vendored with this repository.  This script documents
their public locations and drops them into data/sociopatterns/, where the
acceptance suite picks them up for the clique-union validation check (the
suite skips that check when the files are absent).

Files are the "t i j" co-presence edge lists released alongside the
co-location studies on http://www.sociopatterns.org (mirrored on Zenodo).
Each line means nodes i and j shared a spatial location in 20-second time
bin t.  URLs may move; check the dataset pages if a download fails.
"""

import sys
import urllib.request
from pathlib import Path

DATASETS = {
    "tij_pres_InVS15.dat": "https://zenodo.org/record/2540795/files/tij_pres_InVS15.dat",
    "tij_pres_LyonSchool.dat": "https://zenodo.org/record/2540795/files/tij_pres_LyonSchool.dat",
    "tij_pres_Thiers13.dat": "https://zenodo.org/record/2540795/files/tij_pres_Thiers13.dat",
}

TARGET = Path(__file__).resolve().parent.parent / "data" / "sociopatterns"


def main() -> int:
    TARGET.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, url in DATASETS.items():
        destination = TARGET / name
        if destination.exists():
            print(f"{name}: already present")
            continue
        print(f"{name}: fetching {url}")
        try:
            with urllib.request.urlopen(url, timeout=60) as response:
                destination.write_bytes(response.read())
        except OSError as exc:
            print(f"{name}: download failed ({exc})", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
