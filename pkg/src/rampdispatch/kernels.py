"""Scalar and array kernels shared by every public module.

Everything here is written in the subset of Python that numba compiles:
floats, ``math``, and 1-D/2-D float arrays.  A solved hour is carried as a
flat float64 *state* vector (layout below) so kernels can pass it around
without objects.  Array kernels come in two flavours, an explicit loop for
numba and a vectorised numpy version for the fallback path; :func:`pick`
selects one at import time.

Trajectory representations
--------------------------
``FORM_SERIES``
    ``Q(t) = Q0 cosh(wt) + Q0' t shc(wt) + r t^2/2 shc(wt/2)^2`` with
    ``r = mu/2c`` and ``shc(y) = sinh(y)/y``.  Exact for the ramp-only
    parabola (``w = 0``) and free of cancellation for ``wT <= EXP_SWITCH``.
``FORM_EXP``
    ``Q(t) = k2 + k1 exp(-wt) + k3e exp(-w(T - t))``, i.e. the partial
    fraction terms with the growing exponential re-anchored at ``t = T``.
    Well conditioned for ``wT > EXP_SWITCH`` up to ``OMEGA_T_MAX``.
``FORM_STEP``
    Ideal step ``Q0 -> E_T/T -> QT`` (no ramping price).
"""

import math

import numpy as np

from ._jit import jit, pick

GENERAL = 0
RAMP_ONLY = 1
ENERGY_ONLY = 2
DEGENERATE = -1
SINGULAR = -2

FORM_SERIES = 0
FORM_EXP = 1
FORM_STEP = 2

PRICE_EPS = 1e-12
OMEGA_T_MAX = 500.0
EXP_SWITCH = 1.0
DET_RTOL = 1e-13
N_TAYLOR = 30

S_REGIME = 0
S_FORM = 1
S_OMEGA = 2
S_T = 3
S_Q0 = 4
S_QT = 5
S_ET = 6
S_MU = 7
S_QDOT0 = 8
S_R = 9
S_K1 = 10
S_K2 = 11
S_K3E = 12
STATE_LEN = 13

# columns of the simulator output table
OUT_Q0 = 0
OUT_TARGET = 1
OUT_C_OPT = 2
OUT_C_BASE = 3
OUT_C_STAR = 4
OUT_DELIVERED = 5
OUT_CARRIED = 6
OUT_REGIME = 7
OUT_COLS = 8


# ---------------------------------------------------------------------------
# special functions


@jit
def shc(y):
    """sinh(y)/y."""
    if abs(y) < 0.1:
        y2 = y * y
        return 1.0 + y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0 * (1.0 + y2 / 72.0)))
    return math.sinh(y) / y


@jit
def sinh_excess(y):
    """(sinh(y) - y)/y^3, with the series below |y| = 1."""
    if abs(y) < 1.0:
        y2 = y * y
        term = 1.0 / 6.0
        total = term
        for k in range(1, 12):
            term *= y2 / ((2 * k + 2) * (2 * k + 3))
            total += term
        return total
    return (math.sinh(y) - y) / (y * y * y)


@jit
def atanhc(z):
    """atanh(z)/z for |z| < 1."""
    if abs(z) < 0.1:
        z2 = z * z
        return 1.0 + z2 * (1.0 / 3.0 + z2 * (1.0 / 5.0 + z2 * (1.0 / 7.0 + z2 * (1.0 / 9.0 + z2 / 11.0))))
    return math.atanh(z) / z


def shc_np(y):
    y = np.asarray(y, dtype=float)
    y2 = y * y
    series = 1.0 + y2 / 6.0 * (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0 * (1.0 + y2 / 72.0)))
    safe = np.where(np.abs(y) < 0.1, 1.0, y)
    return np.where(np.abs(y) < 0.1, series, np.sinh(safe) / safe)


def sinh_excess_np(y):
    y = np.asarray(y, dtype=float)
    y2 = y * y
    term = np.full_like(y, 1.0 / 6.0)
    series = term.copy()
    for k in range(1, 12):
        term = term * y2 / ((2 * k + 2) * (2 * k + 3))
        series = series + term
    safe = np.where(np.abs(y) < 1.0, 1.0, y)
    return np.where(np.abs(y) < 1.0, series, (np.sinh(safe) - safe) / safe**3)


# ---------------------------------------------------------------------------
# regime and solve


@jit
def classify(a, c, T):
    if a <= PRICE_EPS and c <= PRICE_EPS:
        return DEGENERATE
    if c <= PRICE_EPS:
        return ENERGY_ONLY
    if a <= PRICE_EPS:
        return RAMP_ONLY
    if math.sqrt(a / c) * T > OMEGA_T_MAX:
        return ENERGY_ONLY
    return GENERAL


@jit
def parameter_entries(omega, c, T, Q0, QT, ET):
    """Entries (A, B, C, D, E_delta, Q_delta) of the 2x2 multiplier system.

    Written through shc/sinh_excess so that ``omega = 0`` gives the
    ramp-only entries exactly.
    """
    x = omega * T
    h = shc(0.5 * x)
    A = T**3 * sinh_excess(x) / (2.0 * c)
    B = 0.5 * T * T * h * h
    C = B / (2.0 * c)
    D = T * shc(x)
    e_delta = ET - D * Q0
    q_delta = QT - Q0 * math.cosh(x)
    return A, B, C, D, e_delta, q_delta


@jit
def solve_series(omega, c, T, Q0, QT, ET):
    """(mu, qdot0) from the 2x2 system by Cramer's rule; NaNs if singular."""
    A, B, C, D, e_delta, q_delta = parameter_entries(omega, c, T, Q0, QT, ET)
    det = A * D - B * C
    if abs(det) <= DET_RTOL * (abs(A * D) + abs(B * C)):
        return math.nan, math.nan
    mu = (e_delta * D - B * q_delta) / det
    qdot0 = (A * q_delta - C * e_delta) / det
    return mu, qdot0


@jit
def solve_exp(omega, T, Q0, QT, ET):
    """(k1, k2, k3e) for the end-anchored exponential form."""
    x = omega * T
    e = math.exp(-x)
    one_m_e = -math.expm1(-x)
    L = one_m_e / omega
    diff = (Q0 - QT) / one_m_e
    denom = L - 0.5 * T * (1.0 + e)
    s = (ET - 0.5 * T * (Q0 + QT)) / denom
    k2 = 0.5 * (Q0 + QT - (1.0 + e) * s)
    k1 = 0.5 * (s + diff)
    k3e = 0.5 * (s - diff)
    return k1, k2, k3e


@jit
def solve_state(a, c, T, Q0, QT, ET):
    s = np.zeros(STATE_LEN)
    regime = classify(a, c, T)
    s[S_REGIME] = regime
    s[S_T] = T
    s[S_Q0] = Q0
    s[S_QT] = QT
    s[S_ET] = ET
    if regime == DEGENERATE:
        return s
    if regime == ENERGY_ONLY:
        level = ET / T
        s[S_FORM] = FORM_STEP
        s[S_MU] = -2.0 * a * level
        s[S_K2] = level
        return s
    omega = 0.0
    if regime == GENERAL:
        omega = math.sqrt(a / c)
    s[S_OMEGA] = omega
    x = omega * T
    if x <= EXP_SWITCH:
        mu, qdot0 = solve_series(omega, c, T, Q0, QT, ET)
        if math.isnan(mu):
            s[S_REGIME] = SINGULAR
            return s
        s[S_FORM] = FORM_SERIES
        s[S_MU] = mu
        s[S_QDOT0] = qdot0
        s[S_R] = mu / (2.0 * c)
    else:
        k1, k2, k3e = solve_exp(omega, T, Q0, QT, ET)
        s[S_FORM] = FORM_EXP
        s[S_K1] = k1
        s[S_K2] = k2
        s[S_K3E] = k3e
        s[S_MU] = -2.0 * a * k2
        s[S_R] = -omega * omega * k2
        s[S_QDOT0] = omega * (math.exp(-x) * k3e - k1)
    return s


# ---------------------------------------------------------------------------
# pointwise evaluation


@jit
def power_at(s, t):
    form = s[S_FORM]
    if form == FORM_STEP:
        if t <= 0.0:
            return s[S_Q0]
        if t >= s[S_T]:
            return s[S_QT]
        return s[S_K2]
    w = s[S_OMEGA]
    if form == FORM_EXP:
        return s[S_K2] + s[S_K1] * math.exp(-w * t) + s[S_K3E] * math.exp(-w * (s[S_T] - t))
    h = shc(0.5 * w * t)
    return s[S_Q0] * math.cosh(w * t) + s[S_QDOT0] * t * shc(w * t) + 0.5 * s[S_R] * t * t * h * h


@jit
def ramp_at(s, t):
    form = s[S_FORM]
    if form == FORM_STEP:
        return 0.0
    w = s[S_OMEGA]
    if form == FORM_EXP:
        return w * (s[S_K3E] * math.exp(-w * (s[S_T] - t)) - s[S_K1] * math.exp(-w * t))
    sh = t * shc(w * t)
    return s[S_Q0] * w * w * sh + s[S_QDOT0] * math.cosh(w * t) + s[S_R] * sh


@jit
def energy_at(s, t):
    form = s[S_FORM]
    if form == FORM_STEP:
        return s[S_K2] * t
    w = s[S_OMEGA]
    if form == FORM_EXP:
        T = s[S_T]
        return (s[S_K2] * t
                + s[S_K1] * (-math.expm1(-w * t)) / w
                + s[S_K3E] * (math.exp(-w * (T - t)) - math.exp(-w * T)) / w)
    h = shc(0.5 * w * t)
    return (s[S_Q0] * t * shc(w * t)
            + 0.5 * s[S_QDOT0] * t * t * h * h
            + s[S_R] * t**3 * sinh_excess(w * t))


@jit
def turning_time(s):
    """Interior zero of the ramp, or NaN.  The ramp has at most one zero."""
    form = s[S_FORM]
    T = s[S_T]
    w = s[S_OMEGA]
    tc = math.nan
    if form == FORM_STEP:
        return math.nan
    # a roundoff-level ramp (flat hour) has no meaningful sign change
    scale = abs(s[S_Q0]) + abs(s[S_QT]) + abs(s[S_ET]) / T
    if (abs(ramp_at(s, 0.0)) + abs(ramp_at(s, T))) * T <= 1e-12 * scale:
        return math.nan
    if form == FORM_SERIES:
        den = w * w * s[S_Q0] + s[S_R]
        if den == 0.0:
            return math.nan
        u = -s[S_QDOT0] / den
        z = w * u
        if abs(z) >= 1.0:
            return math.nan
        tc = u * atanhc(z)
    elif form == FORM_EXP:
        k1 = s[S_K1]
        k3e = s[S_K3E]
        if k1 * k3e <= 0.0:
            return math.nan
        tc = (w * T + math.log(k1 / k3e)) / (2.0 * w)
    else:
        return math.nan
    if tc > 0.0 and tc < T:
        return tc
    return math.nan


def _power_many_loop_py(s, t):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        out[i] = power_at(s, t[i])
    return out


def _ramp_many_loop_py(s, t):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        out[i] = ramp_at(s, t[i])
    return out


def _energy_many_loop_py(s, t):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        out[i] = energy_at(s, t[i])
    return out


def _power_many_np(s, t):
    form = s[S_FORM]
    w = s[S_OMEGA]
    if form == FORM_STEP:
        out = np.full(t.shape, s[S_K2])
        out[t <= 0.0] = s[S_Q0]
        out[t >= s[S_T]] = s[S_QT]
        return out
    if form == FORM_EXP:
        return s[S_K2] + s[S_K1] * np.exp(-w * t) + s[S_K3E] * np.exp(-w * (s[S_T] - t))
    h = shc_np(0.5 * w * t)
    return s[S_Q0] * np.cosh(w * t) + s[S_QDOT0] * t * shc_np(w * t) + 0.5 * s[S_R] * t * t * h * h


def _ramp_many_np(s, t):
    form = s[S_FORM]
    w = s[S_OMEGA]
    if form == FORM_STEP:
        return np.zeros(t.shape)
    if form == FORM_EXP:
        return w * (s[S_K3E] * np.exp(-w * (s[S_T] - t)) - s[S_K1] * np.exp(-w * t))
    sh = t * shc_np(w * t)
    return s[S_Q0] * w * w * sh + s[S_QDOT0] * np.cosh(w * t) + s[S_R] * sh


def _energy_many_np(s, t):
    form = s[S_FORM]
    w = s[S_OMEGA]
    if form == FORM_STEP:
        return s[S_K2] * t
    if form == FORM_EXP:
        T = s[S_T]
        return (s[S_K2] * t + s[S_K1] * (-np.expm1(-w * t)) / w
                + s[S_K3E] * (np.exp(-w * (T - t)) - np.exp(-w * T)) / w)
    h = shc_np(0.5 * w * t)
    return (s[S_Q0] * t * shc_np(w * t) + 0.5 * s[S_QDOT0] * t * t * h * h
            + s[S_R] * t**3 * sinh_excess_np(w * t))


power_many = pick(jit(_power_many_loop_py), _power_many_np)
ramp_many = pick(jit(_ramp_many_loop_py), _ramp_many_np)
energy_many = pick(jit(_energy_many_loop_py), _energy_many_np)


# ---------------------------------------------------------------------------
# costs


@jit
def _series_integrals(s):
    """(int Q^2, int Qdot^2, int Q) over [0, T] from the Taylor series of Q."""
    T = s[S_T]
    w2T2 = (s[S_OMEGA] * T) ** 2
    p = np.zeros(N_TAYLOR)
    # p[n] = q_n T^n, with q'' = w^2 q + r
    p[0] = s[S_Q0]
    p[1] = s[S_QDOT0] * T
    p[2] = 0.5 * (w2T2 * s[S_Q0] + s[S_R] * T * T)
    for n in range(1, N_TAYLOR - 2):
        p[n + 2] = w2T2 * p[n] / ((n + 2) * (n + 1))
    sq = 0.0
    sqd = 0.0
    lin = 0.0
    for m in range(N_TAYLOR):
        lin += p[m] / (m + 1)
        for n in range(N_TAYLOR):
            sq += p[m] * p[n] / (m + n + 1)
            if m > 0 and n > 0:
                sqd += m * n * p[m] * p[n] / (m + n - 1)
    return sq * T, sqd / T, lin * T


@jit
def _exp_integrals(s):
    T = s[S_T]
    w = s[S_OMEGA]
    k1 = s[S_K1]
    k2 = s[S_K2]
    k3 = s[S_K3E]
    x = w * T
    e = math.exp(-x)
    one_m_e = -math.expm1(-x)
    one_m_e2 = -math.expm1(-2.0 * x)
    decay = (k1 * k1 + k3 * k3) * one_m_e2 / (2.0 * w)
    cross = 2.0 * k1 * k3 * T * e
    sq = k2 * k2 * T + decay + 2.0 * k2 * (k1 + k3) * one_m_e / w + cross
    sqd = w * w * (decay - cross)
    lin = k2 * T + (k1 + k3) * one_m_e / w
    return sq, sqd, lin


@jit
def cost_parts(s, a, b, c, qz):
    """(energy, power, ramping, t_c) cost of the continuous trajectory.

    The power (b) term is accumulated piece by piece between ramp zeros as
    ``b/2 |dQ| (Q_i + Q_j - 2 Qz)``, which is exact on monotone pieces.
    """
    form = s[S_FORM]
    T = s[S_T]
    if form == FORM_STEP:
        ET = s[S_ET]
        return a * ET * (ET / T - qz), 0.0, 0.0, math.nan
    if form == FORM_EXP:
        sq, sqd, lin = _exp_integrals(s)
    else:
        sq, sqd, lin = _series_integrals(s)
    energy = a * (sq - qz * lin)
    ramping = c * sqd
    tc = turning_time(s)
    q_start = s[S_Q0]
    q_end = power_at(s, T)
    if math.isnan(tc):
        power = 0.5 * b * abs(q_end - q_start) * (q_end + q_start - 2.0 * qz)
    else:
        q_mid = power_at(s, tc)
        power = (0.5 * b * abs(q_mid - q_start) * (q_mid + q_start - 2.0 * qz)
                 + 0.5 * b * abs(q_end - q_mid) * (q_end + q_mid - 2.0 * qz))
    return energy, power, ramping, tc


@jit
def base_level(Q0, QT, ET, T):
    return 1.2 * (ET / T - (Q0 + QT) / 12.0)


@jit
def base_cost_parts(a, b, c, qz, Q0, QT, ET, T):
    qe = base_level(Q0, QT, ET, T)
    energy = (a * T / 18.0 * (QT * QT + QT * qe + 14.0 * qe * qe + qe * Q0 + Q0 * Q0)
              - a * T / 12.0 * (QT + 10.0 * qe + Q0) * qz)
    power = (abs(0.5 * b * (qe - Q0)) * (qe + Q0 - 2.0 * qz)
             + abs(0.5 * b * (QT - qe)) * (QT + qe - 2.0 * qz))
    ramping = 6.0 * c / T * (QT * QT - 2.0 * QT * qe + 2.0 * qe * qe - 2.0 * Q0 * qe + Q0 * Q0)
    return energy, power, ramping


def _discrete_cost_loop_py(q, ts_h, a, b, c, qz):
    energy = 0.0
    power = 0.0
    ramping = 0.0
    for k in range(q.shape[0] - 1):
        x0 = q[k]
        x1 = q[k + 1]
        energy += 0.25 * a * ts_h * (x0 * x0 + 2.0 * x0 * x1 + x1 * x1 - 2.0 * qz * (x0 + x1))
        power += 0.5 * abs(b * (x1 - x0)) * (x1 + x0 - 2.0 * qz)
        ramping += c / ts_h * (x1 - x0) ** 2
    return energy, power, ramping


def _discrete_cost_np(q, ts_h, a, b, c, qz):
    x0 = q[:-1]
    x1 = q[1:]
    energy = 0.25 * a * ts_h * np.sum((x0 + x1) ** 2 - 2.0 * qz * (x0 + x1))
    power = 0.5 * np.sum(np.abs(b * (x1 - x0)) * (x1 + x0 - 2.0 * qz))
    ramping = c / ts_h * np.sum((x1 - x0) ** 2)
    return float(energy), float(power), float(ramping)


discrete_cost_parts = pick(jit(_discrete_cost_loop_py), _discrete_cost_np)


# ---------------------------------------------------------------------------
# sampling and energy correction


def _sample_loop_py(s, n_steps, ts_h):
    q = np.empty(n_steps + 1)
    T = s[S_T]
    if s[S_FORM] == FORM_EXP:
        w = s[S_OMEGA]
        tau = math.exp(w * ts_h)
        for k in range(n_steps + 1):
            q[k] = s[S_K1] * tau ** (-k) + s[S_K2] + s[S_K3E] * tau ** (k - n_steps)
    else:
        for k in range(n_steps):
            q[k] = power_at(s, k * ts_h)
        q[n_steps] = power_at(s, T)
    return q


def _sample_np(s, n_steps, ts_h):
    k = np.arange(n_steps + 1, dtype=float)
    if s[S_FORM] == FORM_EXP:
        tau = math.exp(s[S_OMEGA] * ts_h)
        return s[S_K1] * tau ** (-k) + s[S_K2] + s[S_K3E] * tau ** (k - n_steps)
    t = k * ts_h
    t[-1] = s[S_T]
    return _power_many_np(s, t)


sample_state = pick(jit(_sample_loop_py), _sample_np)


def _trapezoid_loop_py(q, ts_h):
    total = 0.0
    for k in range(q.shape[0] - 1):
        total += 0.5 * (q[k] + q[k + 1])
    return total * ts_h


def _trapezoid_np(q, ts_h):
    return float(ts_h * (np.sum(q) - 0.5 * (q[0] + q[-1])))


trapezoid_energy = pick(jit(_trapezoid_loop_py), _trapezoid_np)


def _correct_loop_py(q, s, ts_h):
    n = q.shape[0] - 1
    T = s[S_T]
    gap = np.empty(n)
    prev = 0.0
    for k in range(n):
        t1 = T if k == n - 1 else (k + 1) * ts_h
        cur = energy_at(s, t1)
        gap[k] = cur - prev - 0.5 * ts_h * (q[k] + q[k + 1])
        prev = cur
    out = q.copy()
    for k in range(1, n):
        out[k] += (gap[k - 1] + gap[k]) / (2.0 * ts_h)
    total = 0.0
    for k in range(n):
        total += 0.5 * ts_h * (out[k] + out[k + 1])
    shift = (prev - total) / ((n - 1) * ts_h)
    for k in range(1, n):
        out[k] += shift
    return out


def _correct_np(q, s, ts_h):
    n = q.shape[0] - 1
    t = np.arange(n + 1, dtype=float) * ts_h
    t[-1] = s[S_T]
    cum = _energy_many_np(s, t)
    gap = np.diff(cum) - 0.5 * ts_h * (q[:-1] + q[1:])
    out = q.copy()
    out[1:-1] += (gap[:-1] + gap[1:]) / (2.0 * ts_h)
    total = ts_h * (np.sum(out) - 0.5 * (out[0] + out[-1]))
    out[1:-1] += (cum[-1] - total) / ((n - 1) * ts_h)
    return out


correct_energy = pick(jit(_correct_loop_py), _correct_np)


# ---------------------------------------------------------------------------
# multi-hour loop


def _simulate_loop_py(a, b, c, qz, q0, qt, et, T, errors, ts_h, n_steps,
                      corrected, chaining, out):
    """Fill ``out`` row by row; return the failing hour index or -1."""
    carried = 0.0
    prev_end = 0.0
    for h in range(a.shape[0]):
        start = q0[h]
        if chaining and h > 0:
            start = prev_end
        target = et[h] + carried
        s = solve_state(a[h], c[h], T, start, qt[h], target)
        if s[S_REGIME] < 0:
            return h
        ce, cp, cr, _ = cost_parts(s, a[h], b[h], c[h], qz[h])
        q = sample_state(s, n_steps, ts_h)
        if corrected:
            q = correct_energy(q, s, ts_h)
        de, dp, dr = discrete_cost_parts(q, ts_h, a[h], b[h], c[h], qz[h])
        be, bp, br = base_cost_parts(a[h], b[h], c[h], qz[h], start, qt[h], target, T)
        delivered = trapezoid_energy(q, ts_h) + errors[h] * T
        carried = target - delivered
        prev_end = q[n_steps]
        out[h, OUT_Q0] = start
        out[h, OUT_TARGET] = target
        out[h, OUT_C_OPT] = ce + cp + cr
        out[h, OUT_C_BASE] = be + bp + br
        out[h, OUT_C_STAR] = de + dp + dr
        out[h, OUT_DELIVERED] = delivered
        out[h, OUT_CARRIED] = carried
        out[h, OUT_REGIME] = s[S_REGIME]
    return -1


simulate_hours = pick(jit(_simulate_loop_py), _simulate_loop_py)
