"""Transfer functions of unitary colligations on the truncated weighted Fock space.

For a colligation U = [[A, B], [C, D]] built from an intertwining triple, the
row of multi-analytic operators

    phi_(b) = I (x) A_(b)^* + (I (x) C^*) (I - Q)^{-1} Gamma (I (x) B_(b)^*),
    Q = sum_w sqrt(a_w) L_{w~} (x) D_(w)^*,

is evaluated at the boundary (radius 1).  Since the right creation operators
raise the grading, I - Q is unit lower-triangular in the graded basis and the
resolvent is a single linear solve (exact, no series truncation).

Tensor convention throughout: np.kron(Fock factor, inner factor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colligation import Colligation, INTERPRETIVE_FLAGS
from .domain import (RegularPolynomial, b_coefficients,
                     coefficient_words, weighted_left_creation,
                     weighted_right_creation)
from .poisson import PoissonKernel
from .report import VerificationReport
from .words import Word, enumerate_words, reverse


@dataclass(frozen=True)
class TransferFunction:
    """phi_(b) blocks of the transfer row, one per coefficient word of g.

    Each block maps (Fock) (x) C^{r_in} -> (Fock) (x) C^{r_out}.
    """

    colligation: Colligation
    f: RegularPolynomial
    N: int
    blocks: tuple[np.ndarray, ...]
    block_words: tuple[Word, ...]
    fock_size: int

    @property
    def r_out(self) -> int:
        return self.colligation.r_out

    @property
    def r_in(self) -> int:
        return self.colligation.r_in

    def block(self, w: Word) -> np.ndarray:
        return self.blocks[self.block_words.index(tuple(w))]


def _lambda_word_ops(f: RegularPolynomial, N: int) -> dict[Word, np.ndarray]:
    """L_{w~} for every coefficient word w of f (so that L_{w~} e_u = c e_{u w})."""
    lam = weighted_right_creation(f, N)
    return {w: lam.word(reverse(w)) for w in coefficient_words(f)}


def eval_transfer(col: Colligation, N: int) -> TransferFunction:
    """Evaluate the transfer row of a colligation at truncation level N."""
    f = col.triple.f
    g = col.triple.g
    table = enumerate_words(f.n, N)
    size = len(table)
    w_mid = col.slot_dim
    r_out, r_in = col.r_out, col.r_in
    m2 = col.dims["m2"]
    words_f = coefficient_words(f)
    lam_ops = _lambda_word_ops(f, N)

    q = np.zeros((size * w_mid, size * w_mid), dtype=complex)
    gamma_bstar = np.zeros((size * w_mid, size * m2 * r_in), dtype=complex)
    for i, w in enumerate(words_f):
        a = f.coeffs.get(w, 0.0)
        if a == 0.0:
            continue
        q += np.sqrt(a) * np.kron(lam_ops[w], col.d_block(i).conj().T)
        gamma_bstar += np.sqrt(a) * np.kron(lam_ops[w], col.b_block(i).conj().T)

    rhs = np.kron(np.eye(size), col.C.conj().T) @ np.linalg.solve(
        np.eye(size * w_mid) - q, gamma_bstar)
    phi_full = np.kron(np.eye(size), col.A.conj().T) + rhs

    # split the m2 inner column blocks into one matrix per coefficient word of g
    shaped = phi_full.reshape(size * r_out, size, m2, r_in)
    blocks = tuple(shaped[:, :, j, :].reshape(size * r_out, size * r_in)
                   for j in range(m2))
    return TransferFunction(colligation=col, f=f, N=N, blocks=blocks,
                            block_words=tuple(coefficient_words(g)),
                            fock_size=size)


def fourier_coefficients(tf: TransferFunction, w: Word,
                         max_level: int) -> dict[Word, np.ndarray]:
    """Coefficients of phi_(w) = sum_u L_u (x) coef_u for |u| <= max_level.

    coef_u = sqrt(b_{u~}) * (block of phi_(w) from the vacuum columns to the
    rows of the word u~).
    """
    f, N = tf.f, tf.N
    if max_level > N - f.degree:
        raise ValueError(f"max_level {max_level} exceeds N - deg f = {N - f.degree}")
    table = enumerate_words(f.n, N)
    b = b_coefficients(f, N)
    phi = tf.block(w)
    out: dict[Word, np.ndarray] = {}
    for u in table.words:
        if len(u) > max_level:
            continue
        ut = reverse(u)
        i = table.index[ut]
        rows = slice(i * tf.r_out, (i + 1) * tf.r_out)
        out[u] = np.sqrt(b[ut]) * phi[rows, :tf.r_in]
    return out


def _level_projector_indices(table, level: int, inner: int) -> np.ndarray:
    """Row/column indices of the tensor blocks at word levels <= level."""
    top = table.max_level_index(level)
    return np.arange(top * inner)


def fourier_roundtrip_residual(tf: TransferFunction, w: Word, max_level: int) -> float:
    """|| P_rows (phi_(w) - sum_{|u|<=M} L_u (x) coef_u) P_cols ||.

    Rows are restricted to levels <= min(M, N-M) and columns to levels
    <= N-M: on that corner the truncated transfer block agrees exactly with
    its multi-analytic Fourier expansion.
    """
    f, N = tf.f, tf.N
    table = enumerate_words(f.n, N)
    lam = weighted_right_creation(f, N)
    coefs = fourier_coefficients(tf, w, max_level)
    recon = np.zeros_like(tf.block(w))
    for u, c in coefs.items():
        recon += np.kron(lam.word(u), c)
    diff = tf.block(w) - recon
    rows = _level_projector_indices(table, min(max_level, N - max_level), tf.r_out)
    cols = _level_projector_indices(table, N - max_level, tf.r_in)
    return float(np.linalg.norm(diff[np.ix_(rows, cols)], 2))


def multi_analytic_residual(tf: TransferFunction, w: Word) -> float:
    """|| phi_(w) (W_i (x) I) - (W_i (x) I) phi_(w) || on columns of level <= N-1.

    Both compositions agree exactly below the truncation boundary because the
    creation operators raise the grading monotonically.
    """
    f, N = tf.f, tf.N
    table = enumerate_words(f.n, N)
    wl = weighted_left_creation(f, N)
    phi = tf.block(w)
    cols = _level_projector_indices(table, N - 1, tf.r_in)
    res = 0.0
    for i in range(f.n):
        lhs = phi @ np.kron(wl.mats[i], np.eye(tf.r_in))
        rhs = np.kron(wl.mats[i], np.eye(tf.r_out)) @ phi
        res = max(res, float(np.linalg.norm((lhs - rhs)[:, cols], 2)))
    return res


def defect_identity_residual(tf: TransferFunction) -> float:
    """Residual of I - phi phi* = C~ (I - sum a_w L_{w~} L_{w~}^* (x) I) C~*.

    with C~ = (I (x) C^*)(I - Q)^{-1}-style factor; equivalently the identity
    I - phi phi* = M (Delta_L^2 (x) I) M^* with M = (I (x) C^*)(I - Q)^{-1}.
    Exact on the corner of levels <= N - deg f (rows and columns).
    """
    col = tf.colligation
    f, N = tf.f, tf.N
    table = enumerate_words(f.n, N)
    size = len(table)
    w_mid = col.slot_dim
    lam_ops = _lambda_word_ops(f, N)

    q = np.zeros((size * w_mid, size * w_mid), dtype=complex)
    lam_gram = np.zeros((size, size), dtype=complex)
    for i, w in enumerate(coefficient_words(f)):
        a = f.coeffs.get(w, 0.0)
        if a == 0.0:
            continue
        q += np.sqrt(a) * np.kron(lam_ops[w], col.d_block(i).conj().T)
        lam_gram += a * (lam_ops[w] @ lam_ops[w].conj().T)

    m = np.kron(np.eye(size), col.C.conj().T) @ np.linalg.inv(np.eye(size * w_mid) - q)
    phi_row = np.hstack(tf.blocks)
    lhs = np.eye(size * tf.r_out) - phi_row @ phi_row.conj().T
    rhs = m @ np.kron(np.eye(size) - lam_gram, np.eye(w_mid)) @ m.conj().T
    rows = _level_projector_indices(table, N - f.degree, tf.r_out)
    return float(np.linalg.norm((lhs - rhs)[np.ix_(rows, rows)], 2))


def contraction_excess(tf: TransferFunction) -> float:
    """max(0, sigma_max(full transfer row) - 1)."""
    return max(0.0, float(np.linalg.norm(np.hstack(tf.blocks), 2)) - 1.0)


def embed_inner(mat: np.ndarray, fock: int, inner_from: int, inner_to: int,
                axis: int) -> np.ndarray:
    """Zero-pad the inner (per-Fock-block) dimension of a tensor-shaped matrix."""
    if inner_from == inner_to:
        return mat
    if axis == 0:
        out = np.zeros((fock * inner_to, mat.shape[1]), dtype=complex)
        for j in range(fock):
            out[j * inner_to: j * inner_to + inner_from] = \
                mat[j * inner_from:(j + 1) * inner_from]
        return out
    out = np.zeros((mat.shape[0], fock * inner_to), dtype=complex)
    for j in range(fock):
        out[:, j * inner_to: j * inner_to + inner_from] = \
            mat[:, j * inner_from:(j + 1) * inner_from]
    return out


def pad_kernel_matrix(K: PoissonKernel, inner_to: int) -> np.ndarray:
    """Poisson kernel matrix re-indexed with the inner dimension padded to inner_to."""
    size = K.matrix.shape[0] // K.multiplicity
    return embed_inner(K.matrix, size, K.multiplicity, inner_to, axis=0)


def dilation_identity_report(tf: TransferFunction, K1: PoissonKernel,
                             K1p: PoissonKernel, tol: float = 1e-7) -> VerificationReport:
    """Check K' T2_w^* = (1/sqrt(c_w)) phi_(w)^* K for all support words of g.

    K is the kernel of T1, K' the kernel of T1'; both are zero-padded into the
    colligation's inner dimensions (pad coordinates carry no content).
    """
    col = tf.colligation
    g, T2 = col.triple.g, col.triple.T2
    rep = VerificationReport("dilation-identity",
                             environment={"N": str(tf.N), **INTERPRETIVE_FLAGS})
    k1 = pad_kernel_matrix(K1, tf.r_out)
    k1p = pad_kernel_matrix(K1p, tf.r_in)
    for w in g.support():
        c = g.coeffs[w]
        lhs = k1p @ T2.word(w).conj().T
        rhs = tf.block(w).conj().T @ k1 / np.sqrt(c)
        name = "g" + "".join(str(c_) for c_ in w)
        rep.add_residual(f"kernel_intertwine_{name}", float(np.linalg.norm(lhs - rhs, 2)), tol)
    # the two creation intertwinings accompanying the identity
    from .poisson import verify_kernel_identities
    for tag, kern in (("K1", K1), ("K1p", K1p)):
        sub = verify_kernel_identities(kern, tol=tol)
        for rec in sub.checks:
            if rec.name.startswith("intertwine_"):
                rep.checks.append(type(rec)(f"{tag}_{rec.name}", rec.value,
                                            rec.tolerance, rec.passed, rec.kind))
    return rep
