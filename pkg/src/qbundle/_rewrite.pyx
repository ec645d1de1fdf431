# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled rewriting kernel; mirrors ``_rewrite_py`` exactly."""


cpdef object find_redex(tuple word, dict rules, tuple lengths, bint rightmost=False):
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t nl = len(lengths)
    cdef Py_ssize_t i, j, length, step
    if rightmost:
        i = n - 1
        step = -1
    else:
        i = 0
        step = 1
    while 0 <= i < n:
        for j in range(nl):
            length = <Py_ssize_t>lengths[nl - 1 - j if rightmost else j]
            if i + length > n:
                continue
            if word[i:i + length] in rules:
                return i, length
        i += step
    return None


cpdef dict word_nf(tuple word, dict rules, tuple lengths, dict cache, object one,
                   bint rightmost=False):
    cdef object hit = cache.get(word)
    if hit is not None:
        return <dict>hit
    cdef object redex = find_redex(word, rules, lengths, rightmost)
    cdef dict acc, sub, result
    cdef tuple head, tail, rword
    cdef Py_ssize_t i, length
    cdef object rcoef, w, c, prev
    if redex is None:
        result = {word: one}
    else:
        i = (<tuple>redex)[0]
        length = (<tuple>redex)[1]
        head = word[:i]
        tail = word[i + length:]
        acc = {}
        for rword, rcoef in rules[word[i:i + length]]:
            sub = word_nf(head + rword + tail, rules, lengths, cache, one, rightmost)
            for w, c in sub.items():
                prev = acc.get(w)
                if prev is None:
                    acc[w] = rcoef * c
                else:
                    acc[w] = prev + rcoef * c
        result = {}
        for w, c in acc.items():
            if c:
                result[w] = c
    cache[word] = result
    return result


cpdef dict nf_terms(object terms, dict rules, tuple lengths, dict cache, object one,
                    bint rightmost=False):
    cdef dict acc = {}
    cdef dict result = {}
    cdef object word, coef, w, c, prev
    for word, coef in terms:
        for w, c in word_nf(word, rules, lengths, cache, one, rightmost).items():
            prev = acc.get(w)
            if prev is None:
                acc[w] = coef * c
            else:
                acc[w] = prev + coef * c
    for w, c in acc.items():
        if c:
            result[w] = c
    return result


cpdef dict mul_terms(dict xterms, dict yterms, dict rules, tuple lengths, dict cache,
                     object one):
    cdef dict acc = {}
    cdef dict result = {}
    cdef tuple xw, yw
    cdef object xc, yc, coef, w, c, prev
    for xw, xc in xterms.items():
        for yw, yc in yterms.items():
            coef = xc * yc
            for w, c in word_nf(xw + yw, rules, lengths, cache, one, False).items():
                prev = acc.get(w)
                if prev is None:
                    acc[w] = coef * c
                else:
                    acc[w] = prev + coef * c
    for w, c in acc.items():
        if c:
            result[w] = c
    return result
