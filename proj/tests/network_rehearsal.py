#!/usr/bin/env python3
"""Rehearses the optional network criterion against a local embedding mock.

Starts an embeddings endpoint whose vectors are constructed so that every
(prompt, mode) pair has a known cosine against its identity reference, then
runs the acceptance binary with the environment pointed at it and requires
criterion 7 to PASS. The payload classifier below re-derives every codec
independently in Python; a lookup miss means the two implementations
disagree and fails the run loudly.
"""

import json
import math
import os
import subprocess
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

ACCEPTANCE_BIN = sys.argv[1]
DATA_DIR = Path(sys.argv[2])
WORK_DIR = Path(sys.argv[3])

TARGET_COSINE = {
    "fwo": 0.88,
    "fcw": 0.76,
    "fcs": 0.75,
    "aim": 0.69,
    "aim_fcw": 0.68,
    "aim_fwo": 0.68,
}


def collapse(text: str) -> str:
    return " ".join(text.split())


def normalize(text: str) -> str:
    return collapse(text).lower()


def aim(text: str) -> str:
    out = []
    for word in normalize(text).split(" "):
        out.append("".join(f"{ord(c) - ord('a') + 1}:" for c in word))
    return " ".join(out)


def aim_fcw(text: str) -> str:
    words = []
    for word in aim(text).split(" "):
        units = [u + ":" for u in word.split(":")[:-1]]
        words.append("".join(reversed(units)))
    return " ".join(words)


def payload_table(csv_path: Path) -> dict:
    import csv as csvmod

    table = {}
    with csv_path.open() as handle:
        reader = csvmod.reader(handle)
        next(reader)  # header
        for row in reader:
            text = row[0].strip()
            c = collapse(text)
            encodings = {
                "identity": normalize(text),
                "fwo": " ".join(reversed(c.split(" "))),
                "fcw": " ".join(w[::-1] for w in c.split(" ")),
                "fcs": c[::-1],
                "aim": aim(text),
                "aim_fwo": " ".join(reversed(aim(text).split(" "))),
                "aim_fcw": aim_fcw(text),
            }
            for mode, payload in encodings.items():
                table[payload] = mode
    return table


def vector_for(mode: str) -> list:
    if mode == "identity":
        return [1.0, 0.0]
    c = TARGET_COSINE[mode]
    return [c, math.sqrt(1.0 - c * c)]


def main() -> int:
    table = payload_table(DATA_DIR / "synthetic_behaviors.csv")
    misses = []

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            data = []
            for index, text in enumerate(body["input"]):
                mode = table.get(text)
                if mode is None:
                    misses.append(text)
                    self.send_error(400, "unknown payload")
                    return
                data.append({"index": index, "embedding": vector_for(mode)})
            out = json.dumps({"data": data, "model": "rehearsal"}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(out)))
            self.end_headers()
            self.wfile.write(out)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    threading.Thread(target=server.serve_forever, daemon=True).start()

    env = dict(os.environ)
    env["OPENAI_API_KEY"] = "sk-rehearsal-not-a-real-key"
    env["FLIPMAP_ADVBENCH_CSV"] = str(DATA_DIR / "synthetic_behaviors.csv")
    env["FLIPMAP_EMBED_BASE_URL"] = f"http://127.0.0.1:{server.server_address[1]}"
    env["FLIPMAP_CACHE_DIR"] = str(WORK_DIR / "cache")

    result = subprocess.run([ACCEPTANCE_BIN], env=env, capture_output=True, text=True)
    server.shutdown()
    print(result.stdout, end="")

    if misses:
        print(f"codec disagreement: {len(misses)} unknown payloads, e.g. {misses[0]!r}")
        return 1
    for line in result.stdout.splitlines():
        if line.startswith("PASS") and "criterion 7" in line:
            return result.returncode
    print("criterion 7 did not PASS against the rehearsal endpoint")
    return 1


if __name__ == "__main__":
    sys.exit(main())
