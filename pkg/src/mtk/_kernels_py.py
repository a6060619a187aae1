"""Pure-Python lift-tree kernels; the reference the compiled module must match.

A lift of a quotient path ``e_1 ... e_n`` is a digit vector ``c`` with
``0 <= c_i < |w_i|``.  The integer ``m`` acts by the carry recursion::

    c_i' = (m_{i-1} + c_i) mod |w_i|
    t_i  = (m_{i-1} + c_i - c_i') / w_i
    m_i  = t_i * wbar_i,          m_0 = m
"""


def act(digits, w, wbar, m):
    """Return ``(new_digits, final_carry)`` for ``m`` acting on ``digits``."""
    out = []
    for c, a, b in zip(digits, w, wbar):
        s = m + c
        c2 = s % abs(a)
        out.append(c2)
        m = (s - c2) // a * b
    return tuple(out), m


def fixes(digits, w, wbar, m, depth=None):
    n = len(digits) if depth is None else depth
    return act(digits[:n], w[:n], wbar[:n], m)[0] == tuple(digits[:n])


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def brute_stabiliser(digits, w, wbar):
    """Least ``M > 0`` fixing the lift, found one level at a time.

    At level ``k`` the multipliers of the previous answer that fix the
    depth-``k`` prefix are searched directly.  The result is then checked:
    ``M`` fixes the lift and ``M / p`` does not for any prime ``p | M``.
    Returns a negative code when the search or the check fails.
    """
    digits, w, wbar = tuple(digits), tuple(w), tuple(wbar)
    m = 1
    for k in range(1, len(digits) + 1):
        for j in range(1, abs(w[k - 1]) + 1):
            if fixes(digits, w, wbar, j * m, k):
                m *= j
                break
        else:
            return -1
    if not fixes(digits, w, wbar, m):
        return -2
    for p in _prime_divisors(m):
        if fixes(digits, w, wbar, m // p):
            return -2
    return m


def stabilisers_for_path(w, wbar):
    """``brute_stabiliser`` for every digit vector, in lexicographic order."""
    radices = [abs(a) for a in w]
    digits = [0] * len(w)
    out = []
    while True:
        out.append(brute_stabiliser(digits, w, wbar))
        k = len(digits) - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] < radices[k]:
                break
            digits[k] = 0
            k -= 1
        if k < 0:
            return out
