"""Hot numeric kernels: per-step propagation and channel accumulation.

Every kernel exists twice: a numba @njit build (default) and a pure-numpy
build. The active backend is chosen at import time; set the environment
variable PERCWALK_DISABLE_NUMBA=1 before importing to force the numpy path
(the numpy path is also used automatically when numba is not importable).
Both builds implement identical math on identical pre-sampled keep bits, so
results agree to float round-off; ``benchmarks/bench_kernels.py`` compares
their speed.

Per-step propagators are exact spectral exponentials. For graphs with at
most CACHE_MAX_EDGES edges the propagators are memoized by realization mask
(bounded at CACHE_MAX_ENTRIES; with <= 2^16 possible masks the bound is
never exceeded, so eviction never fires); larger graphs practically never
repeat a mask and bypass the cache.
"""
from __future__ import annotations

import os
from collections import OrderedDict

import numpy as np

try:
    from numba import njit, types
    from numba.typed import Dict as _NumbaDict

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_DISABLE = os.environ.get("PERCWALK_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
NUMBA_ENABLED = HAVE_NUMBA and not _DISABLE

CACHE_MAX_EDGES = 16
CACHE_MAX_ENTRIES = 1 << 16
CACHE_MAX_BYTES = 1 << 28  # 256 MiB of cached propagators
CHANNEL_BATCH = 512


def active_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def propagator_cache_capacity(edge_count: int, max_distinct: int, dim: int) -> int:
    """Number of propagator slots to preallocate; 0 disables caching."""
    if edge_count > CACHE_MAX_EDGES:
        return 0
    cap = min(1 << edge_count, max_distinct, CACHE_MAX_ENTRIES)
    if cap * dim * dim * 16 > CACHE_MAX_BYTES:
        return 0
    return cap


def hamiltonian_from_bits(edges: np.ndarray, bits: np.ndarray, gamma: float, n: int) -> np.ndarray:
    """Laplacian of the kept edges; reference (numpy) construction."""
    h = np.zeros((n, n), dtype=np.float64)
    for e in range(edges.shape[0]):
        if bits[e]:
            u, v = edges[e, 0], edges[e, 1]
            h[u, u] += gamma
            h[v, v] += gamma
            h[u, v] -= gamma
            h[v, u] -= gamma
    return h


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------


class _LruPropagatorCache:
    """Mask-keyed propagator cache, least-recently-used eviction."""

    def __init__(self, capacity: int = CACHE_MAX_ENTRIES):
        self.capacity = capacity
        self._data: OrderedDict[int, np.ndarray] = OrderedDict()

    def get(self, key: int):
        u = self._data.get(key)
        if u is not None:
            self._data.move_to_end(key)
        return u

    def put(self, key: int, value: np.ndarray) -> None:
        self._data[key] = value
        if len(self._data) > self.capacity:
            self._data.popitem(last=False)


def _unitary_for_bits_numpy(edges, bits, gamma, n, tau):
    h = hamiltonian_from_bits(edges, bits, gamma, n)
    w, q = np.linalg.eigh(h)
    return (q * np.exp(-1j * tau * w)) @ q.T


def _stochastic_for_bits_numpy(edges, bits, gamma, n, tau):
    h = hamiltonian_from_bits(edges, bits, gamma, n)
    w, q = np.linalg.eigh(h)
    return np.maximum((q * np.exp(-tau * w)) @ q.T, 0.0)


def _mask_keys(bits_2d: np.ndarray) -> np.ndarray:
    """Pack per-step keep bits (S, E) into int64 mask keys, E <= 62."""
    pow2 = np.left_shift(np.int64(1), np.arange(bits_2d.shape[1], dtype=np.int64))
    return bits_2d.astype(np.int64) @ pow2


def trajectory_states_numpy(edges, n, gamma, tau, bits, record_steps, psi0, renorm_every, renorm_tol):
    steps, edge_count = bits.shape
    n_rec = record_steps.shape[0]
    out = np.empty((n_rec, n), dtype=np.complex128)
    psi = psi0.astype(np.complex128).copy()
    max_drift = 0.0
    rec_i = 0
    if rec_i < n_rec and record_steps[rec_i] == 0:
        out[0] = psi
        rec_i = 1
    use_cache = propagator_cache_capacity(edge_count, steps, n) > 0
    cache = _LruPropagatorCache() if use_cache else None
    keys = _mask_keys(bits) if use_cache else None
    for s in range(steps):
        if use_cache:
            key = int(keys[s])
            u = cache.get(key)
            if u is None:
                u = _unitary_for_bits_numpy(edges, bits[s], gamma, n, tau)
                cache.put(key, u)
            psi = u @ psi
        else:
            h = hamiltonian_from_bits(edges, bits[s], gamma, n)
            w, q = np.linalg.eigh(h)
            psi = q @ (np.exp(-1j * tau * w) * (q.T @ psi))
        drift = abs(np.linalg.norm(psi) - 1.0)
        if drift > max_drift:
            max_drift = drift
        if (s + 1) % renorm_every == 0 and drift > renorm_tol:
            psi = psi / np.linalg.norm(psi)
        if rec_i < n_rec and record_steps[rec_i] == s + 1:
            out[rec_i] = psi
            rec_i += 1
    return out, max_drift


def classical_trajectory_numpy(edges, n, gamma, tau, bits, record_steps, p0):
    steps, edge_count = bits.shape
    n_rec = record_steps.shape[0]
    out = np.empty((n_rec, n), dtype=np.float64)
    p = p0.astype(np.float64).copy()
    rec_i = 0
    if rec_i < n_rec and record_steps[rec_i] == 0:
        out[0] = p
        rec_i = 1
    use_cache = propagator_cache_capacity(edge_count, steps, n) > 0
    cache = _LruPropagatorCache() if use_cache else None
    keys = _mask_keys(bits) if use_cache else None
    for s in range(steps):
        if use_cache:
            key = int(keys[s])
            m = cache.get(key)
            if m is None:
                m = _stochastic_for_bits_numpy(edges, bits[s], gamma, n, tau)
                cache.put(key, m)
        else:
            m = _stochastic_for_bits_numpy(edges, bits[s], gamma, n, tau)
        p = m @ p
        if rec_i < n_rec and record_steps[rec_i] == s + 1:
            out[rec_i] = p
            rec_i += 1
    return out


def channel_accumulate_numpy(edges, n, gamma, lam, tau):
    """K[(i,j),(k,l)] = sum_r p_r conj(U_r)[i,j] U_r[k,l] over all 2^E masks."""
    edge_count = edges.shape[0]
    dd = n * n
    estack = np.zeros((edge_count, n, n), dtype=np.float64)
    for e in range(edge_count):
        u, v = edges[e, 0], edges[e, 1]
        estack[e, u, u] += gamma
        estack[e, v, v] += gamma
        estack[e, u, v] -= gamma
        estack[e, v, u] -= gamma
    k_acc = np.zeros((dd, dd), dtype=np.complex128)
    total = 1 << edge_count
    shifts = np.arange(edge_count, dtype=np.int64)
    for start in range(0, total, CHANNEL_BATCH):
        masks = np.arange(start, min(start + CHANNEL_BATCH, total), dtype=np.int64)
        bits = ((masks[:, None] >> shifts[None, :]) & 1).astype(np.float64)
        kept = bits.sum(axis=1)
        probs = lam**kept * (1.0 - lam) ** (edge_count - kept)
        live = probs > 0.0
        if not np.any(live):
            continue
        bits, probs = bits[live], probs[live]
        h = np.tensordot(bits, estack, axes=([1], [0]))
        w, q = np.linalg.eigh(h)
        phases = np.exp(-1j * tau * w)
        us = (q * phases[:, None, :]) @ np.transpose(q, (0, 2, 1))
        uf = us.reshape(-1, dd)
        k_acc += uf.conj().T @ (probs[:, None] * uf)
    return k_acc


def ensemble_quantum_numpy(edges, n, gamma, tau, bits3, record_steps, psis0, center, renorm_every, renorm_tol):
    n_traj, steps, edge_count = bits3.shape
    n_rec = record_steps.shape[0]
    sum_outer = np.zeros((n_rec, n, n), dtype=np.complex128)
    sum_dev = np.zeros((n_rec, n), dtype=np.float64)
    sum_dev2 = np.zeros((n_rec, n), dtype=np.float64)
    psis = psis0.astype(np.complex128).copy()

    def _acc(i):
        sum_outer[i] += psis.T @ psis.conj()
        dev = np.abs(psis) ** 2 - center[i]
        sum_dev[i] += dev.sum(axis=0)
        sum_dev2[i] += (dev**2).sum(axis=0)

    rec_i = 0
    if rec_i < n_rec and record_steps[rec_i] == 0:
        _acc(0)
        rec_i = 1
    use_group = propagator_cache_capacity(edge_count, CACHE_MAX_ENTRIES, n) > 0
    cache = _LruPropagatorCache()
    for s in range(steps):
        if use_group:
            keys = _mask_keys(bits3[:, s, :])
            for key in np.unique(keys):
                u = cache.get(int(key))
                if u is None:
                    u = _unitary_for_bits_numpy(edges, bits3[np.argmax(keys == key), s], gamma, n, tau)
                    cache.put(int(key), u)
                sel = keys == key
                psis[sel] = psis[sel] @ u.T
        else:
            for t in range(n_traj):
                h = hamiltonian_from_bits(edges, bits3[t, s], gamma, n)
                w, q = np.linalg.eigh(h)
                psis[t] = q @ (np.exp(-1j * tau * w) * (q.T @ psis[t]))
        if (s + 1) % renorm_every == 0:
            norms = np.linalg.norm(psis, axis=1)
            fix = np.abs(norms - 1.0) > renorm_tol
            if np.any(fix):
                psis[fix] /= norms[fix, None]
        if rec_i < n_rec and record_steps[rec_i] == s + 1:
            _acc(rec_i)
            rec_i += 1
    return sum_outer, sum_dev, sum_dev2


def ensemble_classical_numpy(edges, n, gamma, tau, bits3, record_steps, p0, center):
    n_traj, steps, edge_count = bits3.shape
    n_rec = record_steps.shape[0]
    sum_dist = np.zeros((n_rec, n), dtype=np.float64)
    sum_dev = np.zeros((n_rec, n), dtype=np.float64)
    sum_dev2 = np.zeros((n_rec, n), dtype=np.float64)
    ps = np.tile(p0.astype(np.float64), (n_traj, 1))

    def _acc(i):
        sum_dist[i] += ps.sum(axis=0)
        dev = ps - center[i]
        sum_dev[i] += dev.sum(axis=0)
        sum_dev2[i] += (dev**2).sum(axis=0)

    rec_i = 0
    if rec_i < n_rec and record_steps[rec_i] == 0:
        _acc(0)
        rec_i = 1
    use_group = propagator_cache_capacity(edge_count, CACHE_MAX_ENTRIES, n) > 0
    cache = _LruPropagatorCache()
    for s in range(steps):
        if use_group:
            keys = _mask_keys(bits3[:, s, :])
            for key in np.unique(keys):
                m = cache.get(int(key))
                if m is None:
                    m = _stochastic_for_bits_numpy(edges, bits3[np.argmax(keys == key), s], gamma, n, tau)
                    cache.put(int(key), m)
                sel = keys == key
                ps[sel] = ps[sel] @ m.T
        else:
            for t in range(n_traj):
                m = _stochastic_for_bits_numpy(edges, bits3[t, s], gamma, n, tau)
                ps[t] = m @ ps[t]
        if rec_i < n_rec and record_steps[rec_i] == s + 1:
            _acc(rec_i)
            rec_i += 1
    return sum_dist, sum_dev, sum_dev2


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_hamiltonian(edges, bits, gamma, n):
        h = np.zeros((n, n), dtype=np.float64)
        for e in range(edges.shape[0]):
            if bits[e]:
                u = edges[e, 0]
                v = edges[e, 1]
                h[u, u] += gamma
                h[v, v] += gamma
                h[u, v] -= gamma
                h[v, u] -= gamma
        return h

    @njit(cache=True)
    def _nb_unitary(edges, bits, gamma, n, tau):
        h = _nb_hamiltonian(edges, bits, gamma, n)
        w, q = np.linalg.eigh(h)
        qc = q.astype(np.complex128)
        a = qc * np.exp(-1j * tau * w)
        return np.dot(a, np.ascontiguousarray(qc.T))

    @njit(cache=True)
    def _nb_stochastic(edges, bits, gamma, n, tau):
        h = _nb_hamiltonian(edges, bits, gamma, n)
        w, q = np.linalg.eigh(h)
        a = q * np.exp(-tau * w)
        m = np.dot(a, np.ascontiguousarray(q.T))
        return np.maximum(m, 0.0)

    @njit(cache=True)
    def _nb_mask_key(bits_row):
        key = np.int64(0)
        for e in range(bits_row.shape[0]):
            if bits_row[e]:
                key |= np.int64(1) << np.int64(e)
        return key

    @njit(cache=True)
    def _nb_traj_core(edges, n, gamma, tau, bits, record_steps, psi, out, cache_idx, cache_u, cache_len, renorm_every, renorm_tol):
        steps = bits.shape[0]
        n_rec = record_steps.shape[0]
        max_drift = 0.0
        rec_i = 0
        if rec_i < n_rec and record_steps[rec_i] == 0:
            out[0] = psi
            rec_i = 1
        cap = cache_u.shape[0]
        for s in range(steps):
            if cap > 0:
                key = _nb_mask_key(bits[s])
                if key in cache_idx:
                    u = cache_u[cache_idx[key]]
                else:
                    u = _nb_unitary(edges, bits[s], gamma, n, tau)
                    slot = cache_len[0]
                    cache_u[slot] = u
                    cache_idx[key] = slot
                    cache_len[0] = slot + 1
                psi = np.dot(u, psi)
            else:
                h = _nb_hamiltonian(edges, bits[s], gamma, n)
                w, q = np.linalg.eigh(h)
                qc = q.astype(np.complex128)
                tmp = np.dot(psi, qc)
                tmp = tmp * np.exp(-1j * tau * w)
                psi = np.dot(qc, tmp)
            nrm = 0.0
            for i in range(n):
                nrm += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
            nrm = np.sqrt(nrm)
            drift = abs(nrm - 1.0)
            if drift > max_drift:
                max_drift = drift
            if (s + 1) % renorm_every == 0 and drift > renorm_tol:
                psi = psi / nrm
            if rec_i < n_rec and record_steps[rec_i] == s + 1:
                out[rec_i] = psi
                rec_i += 1
        return max_drift

    @njit(cache=True)
    def _nb_classical_core(edges, n, gamma, tau, bits, record_steps, p, out, cache_idx, cache_m, cache_len):
        steps = bits.shape[0]
        n_rec = record_steps.shape[0]
        rec_i = 0
        if rec_i < n_rec and record_steps[rec_i] == 0:
            out[0] = p
            rec_i = 1
        cap = cache_m.shape[0]
        for s in range(steps):
            if cap > 0:
                key = _nb_mask_key(bits[s])
                if key in cache_idx:
                    m = cache_m[cache_idx[key]]
                else:
                    m = _nb_stochastic(edges, bits[s], gamma, n, tau)
                    slot = cache_len[0]
                    cache_m[slot] = m
                    cache_idx[key] = slot
                    cache_len[0] = slot + 1
            else:
                m = _nb_stochastic(edges, bits[s], gamma, n, tau)
            p = np.dot(m, p)
            if rec_i < n_rec and record_steps[rec_i] == s + 1:
                out[rec_i] = p
                rec_i += 1
        return 0.0

    @njit(cache=True)
    def _nb_channel(edges, n, gamma, lam, tau):
        # propagators are buffered in blocks so the rank-R accumulation runs
        # as one zgemm per block instead of a d^4 scalar loop
        edge_count = edges.shape[0]
        dd = n * n
        block = 256
        k_acc = np.zeros((dd, dd), dtype=np.complex128)
        buf = np.empty((block, dd), dtype=np.complex128)
        bits = np.zeros(edge_count, dtype=np.uint8)
        total = np.int64(1) << np.int64(edge_count)
        count = 0
        for r in range(total):
            kept = 0
            for e in range(edge_count):
                b = (r >> e) & 1
                bits[e] = np.uint8(b)
                kept += b
            p = lam**kept * (1.0 - lam) ** (edge_count - kept)
            if p == 0.0:
                continue
            u = _nb_unitary(edges, bits, gamma, n, tau)
            w = np.sqrt(p)
            for j in range(dd):
                buf[count, j] = w * u.flat[j]
            count += 1
            if count == block:
                k_acc += np.dot(np.ascontiguousarray(buf.conj().T), buf)
                count = 0
        if count > 0:
            tail = buf[:count]
            k_acc += np.dot(np.ascontiguousarray(tail.conj().T), tail)
        return k_acc

    @njit(cache=True)
    def _nb_ensemble_quantum(edges, n, gamma, tau, bits3, record_steps, psis0, center, cache_idx, cache_u, cache_len, sum_outer, sum_dev, sum_dev2, renorm_every, renorm_tol):
        n_traj = bits3.shape[0]
        steps = bits3.shape[1]
        n_rec = record_steps.shape[0]
        cap = cache_u.shape[0]
        max_drift = 0.0
        for t in range(n_traj):
            psi = psis0[t].copy()
            rec_i = 0
            if rec_i < n_rec and record_steps[rec_i] == 0:
                for i in range(n):
                    pi = psi[i]
                    dev = pi.real * pi.real + pi.imag * pi.imag - center[0, i]
                    sum_dev[0, i] += dev
                    sum_dev2[0, i] += dev * dev
                    for j in range(n):
                        sum_outer[0, i, j] += pi * np.conj(psi[j])
                rec_i = 1
            for s in range(steps):
                if cap > 0:
                    key = _nb_mask_key(bits3[t, s])
                    if key in cache_idx:
                        u = cache_u[cache_idx[key]]
                    else:
                        u = _nb_unitary(edges, bits3[t, s], gamma, n, tau)
                        slot = cache_len[0]
                        cache_u[slot] = u
                        cache_idx[key] = slot
                        cache_len[0] = slot + 1
                    psi = np.dot(u, psi)
                else:
                    h = _nb_hamiltonian(edges, bits3[t, s], gamma, n)
                    w, q = np.linalg.eigh(h)
                    qc = q.astype(np.complex128)
                    tmp = np.dot(psi, qc)
                    tmp = tmp * np.exp(-1j * tau * w)
                    psi = np.dot(qc, tmp)
                nrm = 0.0
                for i in range(n):
                    nrm += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
                nrm = np.sqrt(nrm)
                drift = abs(nrm - 1.0)
                if drift > max_drift:
                    max_drift = drift
                if (s + 1) % renorm_every == 0 and drift > renorm_tol:
                    psi = psi / nrm
                if rec_i < n_rec and record_steps[rec_i] == s + 1:
                    for i in range(n):
                        pi = psi[i]
                        dev = pi.real * pi.real + pi.imag * pi.imag - center[rec_i, i]
                        sum_dev[rec_i, i] += dev
                        sum_dev2[rec_i, i] += dev * dev
                        for j in range(n):
                            sum_outer[rec_i, i, j] += pi * np.conj(psi[j])
                    rec_i += 1
        return max_drift

    @njit(cache=True)
    def _nb_ensemble_classical(edges, n, gamma, tau, bits3, record_steps, p0, center, cache_idx, cache_m, cache_len, sum_dist, sum_dev, sum_dev2):
        n_traj = bits3.shape[0]
        steps = bits3.shape[1]
        n_rec = record_steps.shape[0]
        cap = cache_m.shape[0]
        for t in range(n_traj):
            p = p0.copy()
            rec_i = 0
            if rec_i < n_rec and record_steps[rec_i] == 0:
                for i in range(n):
                    dev = p[i] - center[0, i]
                    sum_dist[0, i] += p[i]
                    sum_dev[0, i] += dev
                    sum_dev2[0, i] += dev * dev
                rec_i = 1
            for s in range(steps):
                if cap > 0:
                    key = _nb_mask_key(bits3[t, s])
                    if key in cache_idx:
                        m = cache_m[cache_idx[key]]
                    else:
                        m = _nb_stochastic(edges, bits3[t, s], gamma, n, tau)
                        slot = cache_len[0]
                        cache_m[slot] = m
                        cache_idx[key] = slot
                        cache_len[0] = slot + 1
                else:
                    m = _nb_stochastic(edges, bits3[t, s], gamma, n, tau)
                p = np.dot(m, p)
                if rec_i < n_rec and record_steps[rec_i] == s + 1:
                    for i in range(n):
                        dev = p[i] - center[rec_i, i]
                        sum_dist[rec_i, i] += p[i]
                        sum_dev[rec_i, i] += dev
                        sum_dev2[rec_i, i] += dev * dev
                    rec_i += 1
        return

    def _new_cache(capacity, n, dtype):
        idx = _NumbaDict.empty(key_type=types.int64, value_type=types.int64)
        slab = np.empty((capacity, n, n), dtype=dtype)
        return idx, slab, np.zeros(1, dtype=np.int64)

    def trajectory_states_numba(edges, n, gamma, tau, bits, record_steps, psi0, renorm_every, renorm_tol):
        cap = propagator_cache_capacity(bits.shape[1], bits.shape[0], n)
        cache_idx, cache_u, cache_len = _new_cache(cap, n, np.complex128)
        out = np.empty((record_steps.shape[0], n), dtype=np.complex128)
        drift = _nb_traj_core(
            edges, n, gamma, tau, bits, record_steps, psi0.astype(np.complex128).copy(),
            out, cache_idx, cache_u, cache_len, renorm_every, renorm_tol,
        )
        return out, drift

    def classical_trajectory_numba(edges, n, gamma, tau, bits, record_steps, p0):
        cap = propagator_cache_capacity(bits.shape[1], bits.shape[0], n)
        cache_idx, cache_m, cache_len = _new_cache(cap, n, np.float64)
        out = np.empty((record_steps.shape[0], n), dtype=np.float64)
        _nb_classical_core(
            edges, n, gamma, tau, bits, record_steps, p0.astype(np.float64).copy(),
            out, cache_idx, cache_m, cache_len,
        )
        return out

    def channel_accumulate_numba(edges, n, gamma, lam, tau):
        return _nb_channel(edges, n, float(gamma), float(lam), float(tau))

    def ensemble_quantum_numba(edges, n, gamma, tau, bits3, record_steps, psis0, center, renorm_every, renorm_tol):
        cap = propagator_cache_capacity(bits3.shape[2], CACHE_MAX_ENTRIES, n)
        cache_idx, cache_u, cache_len = _new_cache(cap, n, np.complex128)
        n_rec = record_steps.shape[0]
        sum_outer = np.zeros((n_rec, n, n), dtype=np.complex128)
        sum_dev = np.zeros((n_rec, n), dtype=np.float64)
        sum_dev2 = np.zeros((n_rec, n), dtype=np.float64)
        _nb_ensemble_quantum(
            edges, n, gamma, tau, bits3, record_steps, psis0.astype(np.complex128), center,
            cache_idx, cache_u, cache_len, sum_outer, sum_dev, sum_dev2, renorm_every, renorm_tol,
        )
        return sum_outer, sum_dev, sum_dev2

    def ensemble_classical_numba(edges, n, gamma, tau, bits3, record_steps, p0, center):
        cap = propagator_cache_capacity(bits3.shape[2], CACHE_MAX_ENTRIES, n)
        cache_idx, cache_m, cache_len = _new_cache(cap, n, np.float64)
        n_rec = record_steps.shape[0]
        sum_dist = np.zeros((n_rec, n), dtype=np.float64)
        sum_dev = np.zeros((n_rec, n), dtype=np.float64)
        sum_dev2 = np.zeros((n_rec, n), dtype=np.float64)
        _nb_ensemble_classical(
            edges, n, gamma, tau, bits3, record_steps, p0.astype(np.float64), center,
            cache_idx, cache_m, cache_len, sum_dist, sum_dev, sum_dev2,
        )
        return sum_dist, sum_dev, sum_dev2


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    trajectory_states = trajectory_states_numba
    classical_trajectory = classical_trajectory_numba
    channel_accumulate = channel_accumulate_numba
    ensemble_quantum = ensemble_quantum_numba
    ensemble_classical = ensemble_classical_numba
else:
    trajectory_states = trajectory_states_numpy
    classical_trajectory = classical_trajectory_numpy
    channel_accumulate = channel_accumulate_numpy
    ensemble_quantum = ensemble_quantum_numpy
    ensemble_classical = ensemble_classical_numpy
