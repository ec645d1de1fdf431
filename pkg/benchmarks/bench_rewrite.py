"""Compare the compiled rewriting kernel with the pure-Python fallback.

    python benchmarks/bench_rewrite.py [--words 400] [--length 10] [--repeat 5]

Each timing starts from an empty normal-form cache so the two kernels do
the same amount of rewriting.
"""
from __future__ import annotations

import argparse
import random
import timeit

from qbundle import _rewrite_py
from qbundle.laurent import ONE
from qbundle.presets import load_preset

try:
    from qbundle import _rewrite as _rewrite_c
except ImportError:
    _rewrite_c = None


def _workload(p, n_words, length, seed):
    rng = random.Random(seed)
    n = len(p.symbols)
    words = [tuple(rng.randrange(n) for _ in range(rng.randint(2, length))) for _ in range(n_words)]
    pairs = [({w: ONE}, {v: ONE}) for w, v in zip(words[::2], words[1::2])]
    return words, pairs


def _bench_nf(impl, p, words):
    cache = {}
    for w in words:
        impl.word_nf(w, p.rules, p.lengths, cache, ONE)


def _bench_mul(impl, p, pairs):
    cache = {}
    for x, y in pairs:
        impl.mul_terms(x, y, p.rules, p.lengths, cache, ONE)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--words", type=int, default=400)
    ap.add_argument("--length", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    p = load_preset("suq2")
    words, pairs = _workload(p, args.words, args.length, args.seed)
    kernels = [("python", _rewrite_py)]
    if _rewrite_c is not None:
        kernels.append(("cython", _rewrite_c))
    else:
        print("compiled kernel not built; timing the fallback only")

    # both kernels must agree before timings mean anything
    if _rewrite_c is not None:
        for w in words[:50]:
            a = _rewrite_py.word_nf(w, p.rules, p.lengths, {}, ONE)
            b = _rewrite_c.word_nf(w, p.rules, p.lengths, {}, ONE)
            assert a == b, w

    print(f"{args.words} random words of length <= {args.length} in O(SU_q(2)), best of {args.repeat}")
    results = {}
    for task, fn, data in (("word_nf", _bench_nf, words), ("mul_terms", _bench_mul, pairs)):
        for name, impl in kernels:
            t = min(timeit.repeat(lambda: fn(impl, p, data), number=1, repeat=args.repeat))
            results[task, name] = t
            print(f"  {task:<10} {name:<7} {t * 1e3:9.2f} ms")
        if (task, "cython") in results:
            print(f"  {task:<10} speedup {results[task, 'python'] / results[task, 'cython']:.2f}x")


if __name__ == "__main__":
    main()
