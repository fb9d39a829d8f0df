"""Local-leakage resilience of linear secret sharing over finite fields.

Finite field arithmetic, linear and algebraic-geometric codes, ramp secret
sharing schemes, Fourier tools for leakage analysis, exact statistical
distance computations and the closed-form bounds that go with them.
"""

__version__ = "0.1.0"
