import numpy as np
import pytest

from warbench import _kernels
from warbench._kernels import fallback


def random_shocks(m=2000, n=9, seed=42):
    rng = np.random.default_rng(seed)
    return (rng.random((m, n, 2)) < 0.5).astype(np.uint8)


needs_compiled = pytest.mark.skipif(
    _kernels.compiled is None, reason="compiled extension not built"
)


class TestFallbackKernels:
    def test_terminal_matches_scalar_recursion(self):
        shocks = random_shocks(m=50, n=6)
        B, R = fallback.propagate_terminal(100.0, 80.0, 0.08, 0.1, 0.7, 1.0, shocks)
        for i in range(50):
            b, r = 100.0, 80.0
            for k in range(6):
                zb, zr = shocks[i, k]
                nb = max(0.0, b - 0.08 * 1.0 * (zr * r))
                nr = max(0.0, r - 0.7 * 0.1 * 1.0 * (zb * b))
                b, r = nb, nr
            assert B[i] == pytest.approx(b, rel=1e-15)
            assert R[i] == pytest.approx(r, rel=1e-15)

    def test_cstep_zero_h_equals_real(self):
        shocks = random_shocks(m=200, n=7)
        B, R = fallback.propagate_terminal(90.0, 70.0, 0.05, 0.06, 0.4, 0.5, shocks)
        Bc, Rc, _ = fallback.propagate_terminal_cstep(90.0, 70.0, 0.05, 0.06, 0.4, 0.0, 0.5, shocks)
        # no clamping activates at these scales, so real parts agree
        np.testing.assert_allclose(Bc.real, B, rtol=1e-15)
        np.testing.assert_allclose(Rc.real, R, rtol=1e-15)
        assert np.all(Bc.imag == 0.0) and np.all(Rc.imag == 0.0)

    def test_clamp_flags(self):
        shocks = np.ones((3, 5, 2), dtype=np.uint8)
        _, _, flags = fallback.propagate_terminal_cstep(10.0, 100.0, 0.9, 0.9, 1.0, 1e-20, 1.0, shocks)
        assert flags.all()
        _, _, flags = fallback.propagate_terminal_cstep(100.0, 80.0, 0.01, 0.01, 1.0, 1e-20, 1.0, shocks)
        assert not flags.any()


@needs_compiled
class TestBackendAgreement:
    def test_exact_kernel_bitwise_identical(self):
        shocks = random_shocks()
        args = (100.0, 80.0, 0.08, 0.1, 0.7, 1.0, shocks)
        Bc, Rc = _kernels.compiled.propagate_terminal(*args)
        Bf, Rf = fallback.propagate_terminal(*args)
        assert np.array_equal(Bc, Bf)
        assert np.array_equal(Rc, Rf)

    def test_exact_kernel_bitwise_identical_with_clamping(self):
        shocks = random_shocks(seed=3)
        args = (30.0, 200.0, 0.4, 0.5, 0.9, 1.0, shocks)
        Bc, Rc = _kernels.compiled.propagate_terminal(*args)
        Bf, Rf = fallback.propagate_terminal(*args)
        assert np.array_equal(Bc, Bf)
        assert np.array_equal(Rc, Rf)

    def test_cstep_kernel_agrees_to_ulp(self):
        shocks = random_shocks()
        args = (100.0, 80.0, 0.08, 0.1, 0.7, 1e-20, 1.0, shocks)
        Bc, Rc, fc = _kernels.compiled.propagate_terminal_cstep(*args)
        Bf, Rf, ff = fallback.propagate_terminal_cstep(*args)
        np.testing.assert_allclose(Bc.real, Bf.real, rtol=1e-15)
        np.testing.assert_allclose(Rc.real, Rf.real, rtol=1e-15)
        np.testing.assert_allclose(Bc.imag, Bf.imag, rtol=1e-12)
        np.testing.assert_allclose(Rc.imag, Rf.imag, rtol=1e-12)
        assert np.array_equal(fc, ff)

    def test_gradients_agree_across_backends(self):
        shocks = random_shocks(seed=11)
        h = 1e-20
        args = (100.0, 80.0, 0.08, 0.1, 0.7, h, 1.0, shocks)
        Bc, Rc, _ = _kernels.compiled.propagate_terminal_cstep(*args)
        Bf, Rf, _ = fallback.propagate_terminal_cstep(*args)
        gc = (Bc.imag - Rc.imag) / h
        gf = (Bf.imag - Rf.imag) / h
        np.testing.assert_allclose(gc, gf, rtol=1e-12)

    def test_active_backend_exported(self):
        assert _kernels.BACKEND in ("compiled", "fallback")
        assert _kernels.propagate_terminal is _kernels._active.propagate_terminal
