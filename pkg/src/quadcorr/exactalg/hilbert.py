"""Hilbert symbols of nonzero rationals at the real place and at primes."""

from __future__ import annotations

from sympy import isprime, legendre_symbol

REAL = "real"


class PlaceError(ValueError):
    pass


def _split(n: int, p: int) -> tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _as_integer(a) -> int:
    # a and a * den^2 share a square class
    num, den = int(getattr(a, "numerator", a)), int(getattr(a, "denominator", 1))
    if num == 0:
        raise ZeroDivisionError("Hilbert symbol of zero")
    return num * den


def hilbert_symbol(a, b, place) -> int:
    """(a, b) at ``place`` ("real" or a prime), as +1 or -1."""
    x, y = _as_integer(a), _as_integer(b)
    if place == REAL:
        return -1 if (x < 0 and y < 0) else 1
    if not isinstance(place, int) or not isprime(place):
        raise PlaceError(f"not a place of Q: {place!r}")
    p = place
    alpha, u = _split(x, p)
    beta, v = _split(y, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= int(legendre_symbol(u % p, p))
    if alpha % 2:
        s *= int(legendre_symbol(v % p, p))
    return s


def relevant_places(*values) -> list:
    """The real place, 2, and every odd prime dividing some value's numerator or denominator."""
    from sympy import primefactors

    primes = {2}
    for a in values:
        primes.update(primefactors(abs(_as_integer(a))))
    return [REAL] + sorted(int(q) for q in primes)
