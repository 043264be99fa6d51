#!/usr/bin/env python3
"""Download WDI series for one country into the long CSV layout tsecon reads.

Unsupported convenience: the World Bank revises WDI over time, so a fresh
download will not match an archived snapshot. Record the retrieval date
that this script writes next to the CSV.

    python3 scripts/fetch_wdi.py --country BGD --first 1976 --last 2021 \
        --out data/wdi_bgd_1976_2021.csv
"""

import argparse
import csv
import datetime
import json
import sys
import urllib.request

INDICATORS = [
    "NY.GDP.MKTP.CD",
    "BX.KLT.DINV.CD.WD",
    "BX.TRF.PWKR.CD.DT",
    "DT.ODA.ALLD.CD",
    "NY.GDP.MKTP.KD.ZG",
]
API = "https://api.worldbank.org/v2/country/{country}/indicator/{code}?date={first}:{last}&format=json&per_page=200"


def fetch(country, code, first, last):
    url = API.format(country=country, code=code, first=first, last=last)
    with urllib.request.urlopen(url, timeout=60) as resp:
        payload = json.load(resp)
    if len(payload) < 2 or payload[1] is None:
        raise SystemExit(f"no data for {code}: {payload}")
    return [(int(row["date"]), row["value"]) for row in payload[1]]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--country", default="BGD")
    ap.add_argument("--first", type=int, default=1976)
    ap.add_argument("--last", type=int, default=2021)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rows = []
    for code in INDICATORS:
        for year, value in fetch(args.country, code, args.first, args.last):
            rows.append((year, code, "" if value is None else repr(float(value))))
    rows.sort()
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["year", "indicator_code", "value"])
        w.writerows(rows)
    stamp = args.out + ".retrieved"
    with open(stamp, "w") as f:
        f.write(datetime.date.today().isoformat() + "\n")
    print(f"wrote {args.out} ({len(rows)} rows); retrieval date in {stamp}", file=sys.stderr)


if __name__ == "__main__":
    main()
