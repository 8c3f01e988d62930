"""BLAS thread control for the small-matrix hot loops.

Chains spend their time in O(100 x 100) factorizations and solves, where
multi-threaded BLAS loses far more to synchronization than it gains; the
samplers therefore run their loops under a single BLAS thread.
"""

from __future__ import annotations

from contextlib import nullcontext

try:
    from threadpoolctl import threadpool_limits

    def single_thread_blas():
        return threadpool_limits(limits=1, user_api="blas")

except ImportError:  # pragma: no cover - threadpoolctl ships with scikit-learn

    def single_thread_blas():
        return nullcontext()
