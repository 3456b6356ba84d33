import numpy as np

from sicem.linalg import eigh_backward_error, jacobi_eigh


def _random_hermitian(rng, n_batch, dim, complex_=True):
    a = rng.normal(size=(n_batch, dim, dim))
    if complex_:
        a = a + 1j * rng.normal(size=(n_batch, dim, dim))
    return a + np.conj(np.swapaxes(a, 1, 2))


def test_matches_lapack_eigenvalues():
    rng = np.random.default_rng(1)
    for dim in (3, 4):
        a = _random_hermitian(rng, 400, dim)
        w, _ = jacobi_eigh(a)
        w_ref = np.linalg.eigvalsh(a)
        scale = np.abs(w_ref).max()
        assert np.abs(w - w_ref).max() < 1e-12 * scale


def test_backward_error_bound():
    rng = np.random.default_rng(2)
    a = _random_hermitian(rng, 300, 4)
    w, v = jacobi_eigh(a)
    norms = np.linalg.norm(a, axis=(1, 2))
    assert (eigh_backward_error(a, w, v) <= 1e-12 * norms).all()


def test_real_symmetric_input_stays_real():
    rng = np.random.default_rng(3)
    a = _random_hermitian(rng, 50, 4, complex_=False)
    w, v = jacobi_eigh(a)
    assert not np.iscomplexobj(v)
    assert np.abs(w - np.linalg.eigvalsh(a)).max() < 1e-12 * np.abs(w).max()


def test_degenerate_spectrum():
    # Kramers-style double degeneracy must not break convergence.
    d = np.diag([35.0, -35.0, -35.0, 35.0])
    w, v = jacobi_eigh(d)
    assert np.allclose(w, [-35.0, -35.0, 35.0, 35.0])
    assert eigh_backward_error(d[None], w[None], v[None])[0] < 1e-12 * 70.0


def test_eigenvectors_orthonormal():
    rng = np.random.default_rng(4)
    a = _random_hermitian(rng, 100, 4)
    _, v = jacobi_eigh(a)
    gram = np.conj(np.swapaxes(v, 1, 2)) @ v
    eye = np.eye(4)
    assert np.abs(gram - eye).max() < 1e-13


def test_single_matrix_shape():
    a = np.diag([1.0, 2.0, 3.0, 4.0])
    w, v = jacobi_eigh(a)
    assert w.shape == (4,)
    assert v.shape == (4, 4)
    assert np.allclose(w, [1.0, 2.0, 3.0, 4.0])


def test_zero_matrix():
    w, v = jacobi_eigh(np.zeros((2, 4, 4)))
    assert np.all(w == 0.0)
    assert np.allclose(v, np.broadcast_to(np.eye(4), (2, 4, 4)))
