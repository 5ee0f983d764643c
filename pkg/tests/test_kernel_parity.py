"""Compiled and pure-Python kernels must produce identical results.

The compiled kernel is a statement-for-statement mirror of the fallback and
is built with floating-point contraction disabled, so outputs are compared
for exact equality, not approximate agreement: any drift means the two
backends have diverged and one of them is no longer the code we validated.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

import lienard._kernel as kernel
from lienard._kernel import _fallback

_core = pytest.importorskip(
    "lienard._kernel._core", reason="compiled kernel not built"
)

VDP_F = (0.0, -1.0, 0.0, 1.0 / 3.0)
LINEAR_G = (0.0, 1.0)

SCENARIOS = {
    "revolution-event": dict(
        F=VDP_F,
        g=LINEAR_G,
        x0=2.0,
        t_end=50.0,
        rtol=1e-10,
        atol=1e-10,
        event_kind=kernel.EVENT_XAXIS_POS,
        event_dir=kernel.DIR_DECREASING,
        want_dense=True,
    ),
    "center-to-t-end": dict(
        F=(0.0,),
        g=LINEAR_G,
        x0=1.5,
        t_end=12.0,
        rtol=1e-10,
        atol=1e-10,
        event_kind=kernel.EVENT_NONE,
        event_dir=kernel.DIR_EITHER,
        want_dense=True,
    ),
    "vline-loose-tol": dict(
        F=(0.0, -2.0, 1.0, 1.0),
        g=(0.0, 0.7),
        x0=0.8,
        t_end=30.0,
        rtol=1e-8,
        atol=1e-8,
        event_kind=kernel.EVENT_VLINE,
        event_c=-0.5,
        event_dir=kernel.DIR_EITHER,
        want_dense=False,
    ),
    "blowup": dict(
        F=(0.0, -1.0),
        g=(0.0, 0.001),
        x0=1.0,
        y0=1.0,
        t_end=100.0,
        rtol=1e-10,
        atol=1e-10,
        event_kind=kernel.EVENT_NONE,
        event_dir=kernel.DIR_EITHER,
        want_dense=False,
    ),
}


def run_both(spec):
    args = (
        spec["F"],
        spec["F"],
        spec["g"],
        spec["g"],
        spec["x0"],
        spec.get("y0", 0.0),
        0.0,
        spec["t_end"],
        spec["rtol"],
        spec["atol"],
        spec["event_kind"],
        spec.get("event_c", 0.0),
        spec["event_dir"],
        spec["want_dense"],
        2_000_000,
        1e8,
    )
    return _fallback.run_core(*args), _core.run_core(*args)


class TestRawParity:
    @pytest.mark.parametrize("name", sorted(SCENARIOS))
    def test_identical_outputs(self, name):
        ref, got = run_both(SCENARIOS[name])
        assert got[0] == ref[0]  # status
        assert got[1] == ref[1]  # t
        assert got[2] == ref[2]  # x
        assert got[3] == ref[3]  # y
        assert got[5:] == ref[5:]  # naccept, nreject, nfev
        if ref[4] is None:
            assert got[4] is None
        else:
            assert got[4].shape == ref[4].shape
            assert np.array_equal(got[4], ref[4])

    def test_dense_rows_have_twelve_columns(self):
        ref, got = run_both(SCENARIOS["revolution-event"])
        assert ref[4].shape[1] == 12
        assert got[4].shape[1] == 12


class TestBackendSelection:
    def test_switch_and_restore(self):
        old = kernel.use_backend("python")
        try:
            assert kernel.backend_name() == "python"
        finally:
            kernel.use_backend(old)
        assert kernel.backend_name() == old

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            kernel.use_backend("fortran")

    @pytest.mark.parametrize("forced", ["python", "compiled"])
    def test_env_var_forces_backend(self, forced):
        env = dict(os.environ, LIENARD_KERNEL=forced)
        out = subprocess.run(
            [sys.executable, "-c", "import lienard._kernel as k; print(k.backend_name())"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        assert out.stdout.strip() == forced


class TestHighLevelParity:
    def against_both(self, fn):
        old = kernel.use_backend("python")
        try:
            via_python = fn()
        finally:
            kernel.use_backend(old)
        kernel.use_backend("compiled")
        try:
            via_compiled = fn()
        finally:
            kernel.use_backend(old)
        return via_python, via_compiled

    def test_return_map_identical(self):
        from lienard import LienardSystem, poly_fn, return_map

        sys_ = LienardSystem.from_F(poly_fn(*VDP_F), poly_fn(*LINEAR_G))
        py, cy = self.against_both(lambda: return_map(sys_, 2.5))
        assert py.x_out == cy.x_out
        assert py.period == cy.period

    def test_find_cycles_identical(self):
        from lienard import LienardSystem, find_cycles, poly_fn

        sys_ = LienardSystem.from_F(poly_fn(*VDP_F), poly_fn(*LINEAR_G))
        py, cy = self.against_both(
            lambda: find_cycles(sys_, 0.5, 4.0, 8)
        )
        assert [r.x_fixed for r in py] == [r.x_fixed for r in cy]
        assert [r.period for r in py] == [r.period for r in cy]
        assert [r.x_max for r in py] == [r.x_max for r in cy]
