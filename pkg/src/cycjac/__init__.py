"""Exact isogeny decompositions and rank bookkeeping for modular Jacobians.

The package answers three families of questions about the Jacobians
J_1(M, MN) and their quotients, working over a locally persisted snapshot
of newform data:

* how the Jacobian decomposes up to isogeny into simple factors,
* the Mordell-Weil rank of J_1(M, MN) over the cyclotomic field Q(zeta_M),
  unconditionally where analytic ranks allow and conditionally otherwise,
* growth-bound bookkeeping: the seed sets S_r and the genus machinery
  behind them.

All arithmetic is exact (integers, fractions, interval floats for the two
analytic bounds); nothing here evaluates L-functions or q-expansions.
"""

__version__ = "0.1.0"
