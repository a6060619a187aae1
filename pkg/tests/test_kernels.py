import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtk import _kernels_py as pure
from mtk import kernels

try:
    from mtk import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

nonzero = st.integers(-5, 5).filter(bool)


@st.composite
def lifts(draw, max_len=5):
    n = draw(st.integers(0, max_len))
    w = draw(st.lists(nonzero, min_size=n, max_size=n))
    wbar = draw(st.lists(nonzero, min_size=n, max_size=n))
    digits = [draw(st.integers(0, abs(a) - 1)) for a in w]
    return digits, w, wbar


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


class TestPure:
    def test_carry_example(self):
        assert pure.act([1], [2], [3], 1) == ((0,), 3)
        assert pure.act([0], [2], [3], 2) == ((0,), 3)
        assert pure.act([1, 1], [2, 2], [3, 3], 0) == ((1, 1), 0)

    def test_negative_index(self):
        # w = -2: carry t = (m + c - c') / w changes sign
        assert pure.act([0], [-2], [3], 2) == ((0,), -3)

    def test_stabilisers(self):
        assert pure.brute_stabiliser([], [], []) == 1
        assert pure.brute_stabiliser([1], [2], [3]) == 2
        assert pure.brute_stabiliser([0, 0], [2, 2], [3, 3]) == 4
        assert pure.stabilisers_for_path([2, 2], [3, 3]) == [4, 4, 4, 4]

    @settings(max_examples=200, deadline=None)
    @given(lifts(), st.integers(-50, 50), st.integers(-50, 50))
    def test_group_action(self, lift, a, b):
        digits, w, wbar = lift
        once = pure.act(pure.act(digits, w, wbar, b)[0], w, wbar, a)[0]
        assert once == pure.act(digits, w, wbar, a + b)[0]

    @settings(max_examples=200, deadline=None)
    @given(lifts(max_len=4))
    def test_stabiliser_is_minimal(self, lift):
        digits, w, wbar = lift
        m = pure.brute_stabiliser(digits, w, wbar)
        assert m > 0
        assert pure.fixes(digits, w, wbar, m)
        assert not any(pure.fixes(digits, w, wbar, j) for j in range(1, m))


@needs_compiled
class TestParity:
    @settings(max_examples=300, deadline=None)
    @given(lifts(), st.integers(-1000, 1000))
    def test_act(self, lift, m):
        digits, w, wbar = lift
        assert compiled.act(digits, w, wbar, m) == pure.act(digits, w, wbar, m)

    @settings(max_examples=300, deadline=None)
    @given(lifts())
    def test_stabiliser(self, lift):
        digits, w, wbar = lift
        assert compiled.brute_stabiliser(digits, w, wbar) == pure.brute_stabiliser(digits, w, wbar)

    def test_paths(self):
        rng = random.Random(1)
        for _ in range(100):
            n = rng.randint(1, 5)
            w = [rng.choice((-1, 1)) * rng.randint(1, 4) for _ in range(n)]
            wbar = [rng.choice((-1, 1)) * rng.randint(1, 4) for _ in range(n)]
            assert compiled.stabilisers_for_path(w, wbar) == pure.stabilisers_for_path(w, wbar)

    def test_overflow_raises_in_compiled(self):
        with pytest.raises(OverflowError):
            compiled.act([0], [2], [3], 2**62)

    def test_dispatch_falls_back(self):
        big = 2**70
        assert kernels.act([0], [2], [3], big) == pure.act([0], [2], [3], big)
        assert kernels.act([0], [2], [3], big)[1] == 3 * 2**69

    def test_deep_paths_fall_back(self):
        # 3^40 exceeds the compiled carry bound
        w, wbar = [1] * 40, [3] * 40
        assert kernels.act([0] * 40, w, wbar, 1) == pure.act([0] * 40, w, wbar, 1)


def test_env_forces_pure_backend():
    env = dict(os.environ, MTK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from mtk import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
