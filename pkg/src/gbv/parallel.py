"""Worker pool with order-preserving dispatch of named kernels.

Parallelism never changes numbers here: per-item kernels compute exactly
what the serial path computes, results come back in submission order, and
all reductions happen in the caller over that fixed order.  Consequently a
run with 8 workers reproduces a run with 1 bit for bit.

Tasks cross the process boundary as (kernel name, args); the sieve tables
are shipped once per worker through the initializer.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .sieve import SieveTables

_WORKER_TABLES: SieveTables | None = None
_KERNELS = None


def _kernel_table():
    global _KERNELS
    if _KERNELS is None:
        from . import bv_error, density, large_sieve

        def sweep_sup(t, m, x, coprime):
            rec = bv_error.sweep_modulus(m, x, t, coprime)
            return rec.sup_error, rec.witness_a, rec.witness_y

        _KERNELS = {
            "sweep_sup": sweep_sup,
            "farey_square_sum": lambda t, seq, P: large_sieve.farey_square_sum(seq, P),
            "char_form_one_modulus": lambda t, seq, P: large_sieve.char_form_one_modulus(
                seq, P, t
            ),
            "bilinear_lhs_one_modulus": lambda t, a, b, P: large_sieve.bilinear_lhs_one_modulus(
                a, b, P, t
            ),
            "bmvt_sup_one_modulus": lambda t, x, P: large_sieve.bmvt_sup_one_modulus(
                x, P, t
            ),
            "density_outer": lambda t, spec, Q, wm, v: density._density_partial(
                spec, Q, wm, v, t
            ),
        }
    return _KERNELS


def _init_worker(limit, spf) -> None:
    global _WORKER_TABLES
    _WORKER_TABLES = SieveTables(limit, spf)


def _dispatch(task):
    name, args = task
    return _kernel_table()[name](_WORKER_TABLES, *args)


class WorkerPool:
    """Runs named kernels over argument lists, preserving input order.

    workers <= 1 executes inline with the same call structure, so swapping
    worker counts cannot change any reduction order.
    """

    def __init__(self, tables: SieveTables, workers: int = 1):
        self.tables = tables
        self.workers = max(1, int(workers))
        self._ex = None
        if self.workers > 1:
            self._ex = ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(tables.limit, tables.spf),
            )

    def map(self, name: str, argtuples) -> list:
        argtuples = list(argtuples)
        if self._ex is None:
            fn = _kernel_table()[name]
            return [fn(self.tables, *args) for args in argtuples]
        chunk = max(1, len(argtuples) // (4 * self.workers))
        return list(
            self._ex.map(_dispatch, [(name, args) for args in argtuples], chunksize=chunk)
        )

    def close(self) -> None:
        if self._ex is not None:
            self._ex.shutdown()
            self._ex = None

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
