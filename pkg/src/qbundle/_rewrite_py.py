"""Pure-Python rewriting kernel.

Words are tuples of symbol indices.  ``rules`` maps a left-hand side word to
a tuple of ``(word, coefficient)`` pairs; ``lengths`` lists the distinct
left-hand side lengths in increasing order.  Coefficients only need ``+``,
``*`` and truthiness, so the kernel is agnostic of the scalar type.

The compiled twin in ``_rewrite.pyx`` must stay behaviourally identical.
"""


def find_redex(word, rules, lengths, rightmost=False):
    """Return ``(position, length)`` of the chosen redex, or ``None``."""
    n = len(word)
    if rightmost:
        positions = range(n - 1, -1, -1)
        lens = tuple(reversed(lengths))
    else:
        positions = range(n)
        lens = lengths
    for i in positions:
        for length in lens:
            if i + length > n:
                continue
            if word[i:i + length] in rules:
                return i, length
    return None


def word_nf(word, rules, lengths, cache, one, rightmost=False):
    """Normal form of a single word as ``{word: coefficient}``.

    Results are memoised in ``cache`` and shared; callers must not mutate them.
    """
    hit = cache.get(word)
    if hit is not None:
        return hit
    redex = find_redex(word, rules, lengths, rightmost)
    if redex is None:
        result = {word: one}
    else:
        i, length = redex
        head = word[:i]
        tail = word[i + length:]
        acc = {}
        for rword, rcoef in rules[word[i:i + length]]:
            sub = word_nf(head + rword + tail, rules, lengths, cache, one, rightmost)
            for w, c in sub.items():
                prev = acc.get(w)
                acc[w] = rcoef * c if prev is None else prev + rcoef * c
        result = {w: c for w, c in acc.items() if c}
    cache[word] = result
    return result


def nf_terms(terms, rules, lengths, cache, one, rightmost=False):
    """Normal form of a linear combination given as ``(word, coef)`` pairs."""
    acc = {}
    for word, coef in terms:
        for w, c in word_nf(word, rules, lengths, cache, one, rightmost).items():
            prev = acc.get(w)
            acc[w] = coef * c if prev is None else prev + coef * c
    return {w: c for w, c in acc.items() if c}


def mul_terms(xterms, yterms, rules, lengths, cache, one):
    """Normal form of the product of two linear combinations (dicts)."""
    acc = {}
    for xw, xc in xterms.items():
        for yw, yc in yterms.items():
            coef = xc * yc
            for w, c in word_nf(xw + yw, rules, lengths, cache, one).items():
                prev = acc.get(w)
                acc[w] = coef * c if prev is None else prev + coef * c
    return {w: c for w, c in acc.items() if c}
