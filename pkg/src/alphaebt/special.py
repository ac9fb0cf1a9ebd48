"""Digamma and log-gamma for positive real arguments.

Both shift the argument upwards with the recurrence until the asymptotic
(Stirling-type) expansion is accurate to double precision, then undo the
shift. Relative error is around 1e-15 away from the zeros of the functions.
"""

import math

__all__ = ["digamma", "log_gamma", "EULER_GAMMA"]

EULER_GAMMA = 0.57721566490153286061

# B_2k for k = 1..9
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
)

_DIGAMMA_SHIFT = 6.0
_LGAMMA_SHIFT = 10.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check(x):
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise ValueError(f"argument must be a finite positive number, got {x}")
    return x


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function, ``x > 0``.

    >>> round(digamma(1.0), 10)
    -0.5772156649
    """
    x = _check(x)
    acc = 0.0
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def log_gamma(x: float) -> float:
    """``log(Gamma(x))`` for ``x > 0``.

    >>> round(log_gamma(5.0), 10)
    3.1780538303
    """
    x = _check(x)
    if x == 1.0 or x == 2.0:
        return 0.0
    # product of the shifted-over factors, kept in log form to avoid overflow
    shift = 0.0
    while x < _LGAMMA_SHIFT:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k * (2 * k - 1)) * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series - shift
