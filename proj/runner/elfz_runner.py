#!/usr/bin/env python3
# Copyright 2026 The elfz Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference runner for candidate generators.

usage: elfz_runner.py SOURCE SEED COUNT OUT_DIR [--bytes BYTES_PATH]

Loads SOURCE, finds its entry point (the first function named gen_* or
fuzzer_*), and calls it COUNT times, writing OUT_DIR/000000.bin and so on.
A two-argument entry point is called as f(rng, output) and its output is the
test case; a one-argument entry point is called as f(rng) and must return a
str. Every case gets its own stream seeded from (SEED, index). With --bytes,
a single case is produced and every choice is read from BYTES_PATH, wrapping
around at its end. Any uncaught exception exits 1.
"""

import io
import os
import random
import sys
import traceback
import types

PRINTABLE_LO = 32
PRINTABLE_SPAN = 95


class SeededRng(random.Random):
    """random.Random plus the seed template's read_byte/read_chars surface."""

    def read_byte(self, size: int = 1) -> int:
        return self.getrandbits(8 * size)

    def read_chars(self, char_count: int) -> str:
        return "".join(chr(PRINTABLE_LO + b % PRINTABLE_SPAN)
                       for b in self.randbytes(char_count))


class ByteRng:
    """The same surface, with every choice taken from a byte array."""

    def __init__(self, data: bytes):
        if not data:
            raise ValueError("empty byte array")
        self._data = data
        self._cursor = 0

    def _next(self) -> int:
        b = self._data[self._cursor % len(self._data)]
        self._cursor += 1
        return b

    def read_byte(self, size: int = 1) -> int:
        v = 0
        for _ in range(size):
            v = (v << 8) | self._next()
        return v

    def read_chars(self, char_count: int) -> str:
        return "".join(chr(PRINTABLE_LO + self._next() % PRINTABLE_SPAN)
                       for _ in range(char_count))

    def randint(self, a: int, b: int) -> int:
        if b < a:
            raise ValueError("empty range for randint")
        span = b - a + 1
        width = max(1, (span.bit_length() + 7) // 8)
        return a + self.read_byte(width) % span

    def randrange(self, start: int, stop: int = None) -> int:
        if stop is None:
            start, stop = 0, start
        return self.randint(start, stop - 1)

    def choice(self, seq):
        if not seq:
            raise IndexError("cannot choose from an empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def random(self) -> float:
        return self.read_byte(2) / 65536.0

    def getrandbits(self, k: int) -> int:
        return self.read_byte((k + 7) // 8) & ((1 << k) - 1)


def find_entry(namespace):
    for name, obj in namespace.items():
        if isinstance(obj, types.FunctionType) and \
                (name.startswith("gen_") or name.startswith("fuzzer_")):
            return obj
    raise LookupError("no gen_* or fuzzer_* function in the source")


def generate(entry, rng) -> str:
    if entry.__code__.co_argcount >= 2:
        out = io.StringIO()
        entry(rng, out)
        return out.getvalue()
    result = entry(rng)
    if not isinstance(result, str):
        raise TypeError(f"entry point returned {type(result).__name__}, not str")
    return result


def main(argv) -> int:
    args = list(argv[1:])
    bytes_path = None
    if "--bytes" in args:
        i = args.index("--bytes")
        if i + 1 >= len(args):
            print("--bytes needs a path", file=sys.stderr)
            return 2
        bytes_path = args[i + 1]
        del args[i:i + 2]
    if len(args) != 4:
        print(__doc__, file=sys.stderr)
        return 2
    source_path, seed, count, out_dir = args[0], int(args[1]), int(args[2]), args[3]

    with open(source_path, encoding="utf-8") as f:
        source = f.read()
    namespace = {"__name__": "candidate", "Random": random.Random,
                 "MAX_LEN": 16, "CHOICE_RANGE": 3}
    try:
        exec(compile(source, source_path, "exec"), namespace)
        entry = find_entry(namespace)
        if bytes_path is not None:
            with open(bytes_path, "rb") as f:
                streams = [ByteRng(f.read())]
        else:
            streams = (SeededRng(f"{seed}:{i}") for i in range(count))
        for i, rng in enumerate(streams):
            data = generate(entry, rng)
            with open(os.path.join(out_dir, f"{i:06d}.bin"), "wb") as f:
                f.write(data.encode("utf-8", "surrogateescape"))
    except Exception:  # pylint: disable=broad-except
        traceback.print_exc()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
