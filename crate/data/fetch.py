#!/usr/bin/env python3
"""Download the 2-D shape benchmarks and convert them to `<stem>.csv`.

Each output file has the header `x,y,label`. Checksums of the downloaded
files are written to SHA256SUMS on the first fetch and verified on later
ones. Run from anywhere:

    python3 data/fetch.py [--force]

The 100x100 Brown gene-expression distance matrix is not publicly mirrored
in a stable location; place it here by hand as `brown_distances.csv` (a
square comma-separated matrix) and `brown_labels.txt` (one class id per line).
"""

import argparse
import hashlib
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

BASE = "https://cs.joensuu.fi/sipu/datasets/"
LABELED = {
    "aggregation": "Aggregation.txt",
    "flame": "flame.txt",
    "spiral": "spiral.txt",
    "pathbased": "pathbased.txt",
    "jain": "jain.txt",
}
S3_POINTS = "s3.txt"
S3_ARCHIVE = "s-originals.zip"
S3_LABELS = "s3-label.pa"

HERE = Path(__file__).resolve().parent
SUMS = HERE / "SHA256SUMS"


def load_sums():
    if not SUMS.exists():
        return {}
    sums = {}
    for line in SUMS.read_text().splitlines():
        digest, name = line.split(maxsplit=1)
        sums[name] = digest
    return sums


def fetch(name, sums):
    with urllib.request.urlopen(BASE + name, timeout=60) as resp:
        body = resp.read()
    digest = hashlib.sha256(body).hexdigest()
    known = sums.get(name)
    if known is None:
        sums[name] = digest
    elif known != digest:
        sys.exit(f"checksum mismatch for {name}: expected {known}, got {digest}")
    return body


def rows(text):
    for line in text.splitlines():
        fields = line.replace(",", " ").split()
        if fields:
            yield fields


def write_csv(path, points, labels):
    with open(path, "w") as out:
        out.write("x,y,label\n")
        for (x, y), label in zip(points, labels):
            out.write(f"{x},{y},{label}\n")


def partition_labels(text, n):
    # The .pa files carry a free-form header before one integer per line.
    values = []
    for line in text.splitlines():
        line = line.strip()
        if line.lstrip("-").isdigit():
            values.append(int(line))
        else:
            values = []
    if len(values) != n:
        sys.exit(f"{S3_LABELS}: expected {n} labels, found {len(values)}")
    return values


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--force", action="store_true", help="re-download existing files")
    args = parser.parse_args()
    sums = load_sums()

    for stem, name in LABELED.items():
        target = HERE / f"{stem}.csv"
        if target.exists() and not args.force:
            continue
        table = [f[:3] for f in rows(fetch(name, sums).decode())]
        write_csv(target, [(x, y) for x, y, _ in table], [int(float(l)) for *_, l in table])
        print(f"{target.name}: {len(table)} points")

    target = HERE / "s3.csv"
    if args.force or not target.exists():
        points = [tuple(f[:2]) for f in rows(fetch(S3_POINTS, sums).decode())]
        with zipfile.ZipFile(io.BytesIO(fetch(S3_ARCHIVE, sums))) as archive:
            member = next(m for m in archive.namelist() if m.endswith(S3_LABELS))
            labels = partition_labels(archive.read(member).decode(), len(points))
        write_csv(target, points, labels)
        print(f"{target.name}: {len(points)} points")

    SUMS.write_text("".join(f"{d}  {n}\n" for n, d in sorted(sums.items())))


if __name__ == "__main__":
    main()
