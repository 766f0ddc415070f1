import random

import pytest
from hypothesis import given

from _strategies import seeds
from symtorsion.chain import (
    ChainComplex,
    InvalidComplex,
    class_reduce,
    compute_homology,
    split_general,
    validate_complex,
)
from symtorsion.generators import GenConfig, gen_chain_complex
from symtorsion.linalg import Matrix, block_diag, rank

M = Matrix.from_rows


def random_complex(seed: int, n: int | None = None, max_dim: int = 6):
    rng = random.Random(seed)
    n = rng.randint(1, 6) if n is None else n
    return gen_chain_complex(GenConfig(seed=seed, n=n, max_dim=max_dim)).complex


class TestValidate:
    def test_identity_complex_ok(self):
        assert validate_complex(ChainComplex(1, (1, 1), (M([[1]]),)))

    def test_dd_nonzero_reported_at_first_degree(self):
        v = validate_complex(ChainComplex(2, (1, 1, 1), (M([[1]]), M([[1]]))))
        assert not v and v.first_degree == 1
        assert "d_1 o d_2" in v.violations[0]

    def test_zero_boundaries_ok(self):
        assert validate_complex(ChainComplex.zero([2, 3, 1]))

    def test_shape_violation(self):
        v = validate_complex(ChainComplex(1, (2, 1), (M([[1]]),)))
        assert not v and "shape" in v.violations[0]

    def test_constructor_rejects_wrong_counts(self):
        with pytest.raises(ValueError):
            ChainComplex(2, (1, 1), ())


class TestHomology:
    def test_dzero(self):
        c = ChainComplex.zero([2, 3, 1])
        h = compute_homology(c)
        assert h.betti == (2, 3, 1)
        assert all(b.cols == 0 for b in h.B_basis)
        assert all(z.cols == d for z, d in zip(h.Z_basis, c.dims))

    def test_identity_exact(self):
        assert compute_homology(ChainComplex(1, (1, 1), (M([[1]]),))).betti == (0, 0)

    def test_times_two(self):
        h = compute_homology(ChainComplex(1, (1, 1), (M([[2]]),)))
        assert h.betti == (0, 0)
        assert h.B_basis[0] == M([[2]])

    def test_invalid_raises(self):
        with pytest.raises(InvalidComplex):
            compute_homology(ChainComplex(2, (1, 1, 1), (M([[1]]), M([[1]]))))

    def test_frozen_small_case(self):
        # C_2 = Q^2 -> C_1 = Q^2 -> C_0 = Q, d2 = [[1,1],[-1,-1]], d1 = [1 1]
        c = ChainComplex(2, (1, 2, 2), (M([[1, 1]]), M([[1, 1], [-1, -1]])))
        h = compute_homology(c)
        assert h.betti == (0, 0, 1)
        assert h.H_reps[2] == M([[-1], [1]])
        assert h.ell_image[1] == M([[1], [0]])

    @given(seeds)
    def test_invariants(self, seed):
        c = random_complex(seed)
        h = compute_homology(c)
        for p in range(c.n + 1):
            z, b, r, ell = h.Z_basis[p], h.B_basis[p], h.H_reps[p], h.ell_image[p]
            assert (c.d(p) @ z).is_zero() and (c.d(p) @ r).is_zero()
            assert rank(z.hstack(b)) == z.cols
            assert rank(b.hstack(r)) == z.cols == b.cols + r.cols
            full = b.hstack(r, ell)
            assert full.cols == c.dims[p] and rank(full) == c.dims[p]
            below = h.B_basis[p - 1] if p else Matrix(0, 0)
            if p:
                assert c.d(p) @ ell == below

    def test_dimension_identity_200(self):
        for seed in range(200):
            c = random_complex(seed)
            h = compute_homology(c)
            for p in range(c.n + 1):
                below = h.B_basis[p - 1].cols if p else 0
                assert c.dims[p] == h.B_basis[p].cols + h.betti[p] + below


class TestClassReduce:
    def setup_method(self):
        self.c = ChainComplex(1, (2, 1), (M([[1], [0]]),))
        self.h = compute_homology(self.c)

    def test_boundary_is_zero_class(self):
        assert class_reduce(self.c, self.h, 0, self.h.B_basis[0]).is_zero()

    def test_representative_is_unit(self):
        assert class_reduce(self.c, self.h, 0, self.h.H_reps[0]) == M([[1]])

    def test_shifted_representative(self):
        v = self.h.H_reps[0] + self.h.B_basis[0].scale(5)
        assert class_reduce(self.c, self.h, 0, v) == M([[1]])

    def test_non_cycle(self):
        c = ChainComplex(1, (1, 1), (M([[1]]),))
        with pytest.raises(ValueError):
            class_reduce(c, compute_homology(c), 1, M([[1]]))


class TestSplitGeneral:
    def test_exact_has_empty_dzero(self):
        ex, dz = split_general(ChainComplex(1, (1, 1), (M([[3]]),)))
        assert dz.complex.dims == (0, 0) and ex.complex.dims == (1, 1)

    def test_dzero_has_empty_exact(self):
        ex, dz = split_general(ChainComplex.zero([2, 1]))
        assert ex.complex.dims == (0, 0) and dz.complex.dims == (2, 1)

    def test_small_example(self):
        # 0 -> Q^2 --[1 0]--> Q -> 0
        ex, dz = split_general(ChainComplex(1, (1, 2), (M([[1, 0]]),)))
        assert ex.complex.dims == (1, 1)
        assert dz.complex.dims == (0, 1)

    def test_reconstruction_200(self):
        for seed in range(200):
            c = random_complex(seed, max_dim=6)
            ex, dz = split_general(c)
            assert all(b.is_zero() for b in dz.complex.boundaries)
            assert not any(compute_homology(ex.complex).betti)
            assert compute_homology(dz.complex).betti == compute_homology(c).betti
            for p in range(1, c.n + 1):
                emb_hi = ex.embedding[p].hstack(dz.embedding[p])
                emb_lo = ex.embedding[p - 1].hstack(dz.embedding[p - 1])
                assert rank(emb_hi) == c.dims[p]
                assembled = block_diag(ex.complex.d(p), dz.complex.d(p))
                assert emb_lo @ assembled == c.d(p) @ emb_hi
