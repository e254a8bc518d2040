# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled coverage kernels.

A C port of the pure backend: identical marginal panels, conditional-law
breakpoints, association cuts and 7/15 Gauss-Kronrod rules, so both backends
agree to quadrature accuracy while this one runs orders of magnitude faster
inside optimizers and ensembles.
"""

from libc.math cimport M_PI, acos, asin, cos, exp, fabs, fmod, pow, sin, sqrt

from ..quadrature import QuadratureError

cdef enum:
    MAXPANELS = 512

cdef double DEG = 180.0 / M_PI

# Pieces whose endpoint sits within this fraction of the piece width of a
# support edge get the square-root substitution anchored at the edge (the
# conditional density blows up like 1/sqrt(edge - x) there).
cdef double NEAR_EDGE = 0.1

# 15-point Kronrod / 7-point Gauss rule (QUADPACK constants).
cdef double[15] XGK
cdef double[15] WGK
cdef double[15] WG

XGK = [-0.991455371120812639206854697526329,
       -0.949107912342758524526189684047851,
       -0.864864423359769072789712788640926,
       -0.741531185599394439863864773280788,
       -0.586087235467691130294144838258730,
       -0.405845151377397166906606412076961,
       -0.207784955007898467600689403773245,
       0.0,
       0.207784955007898467600689403773245,
       0.405845151377397166906606412076961,
       0.586087235467691130294144838258730,
       0.741531185599394439863864773280788,
       0.864864423359769072789712788640926,
       0.949107912342758524526189684047851,
       0.991455371120812639206854697526329]
WGK = [0.022935322010529224963732008058970,
       0.063092092629978553290700663189204,
       0.104790010322250183839876322541518,
       0.140653259715525918745189590510238,
       0.169004726639267902826583426598550,
       0.190350578064785409913256402421014,
       0.204432940075298892414161999234649,
       0.209482141084727828012999174891714,
       0.204432940075298892414161999234649,
       0.190350578064785409913256402421014,
       0.169004726639267902826583426598550,
       0.140653259715525918745189590510238,
       0.104790010322250183839876322541518,
       0.063092092629978553290700663189204,
       0.022935322010529224963732008058970]
WG = [0.0,
      0.129484966168869693270611432679082,
      0.0,
      0.279705391489276667901467771423780,
      0.0,
      0.381830050505118944950369775488975,
      0.0,
      0.417959183673469387755102040816327,
      0.0,
      0.381830050505118944950369775488975,
      0.0,
      0.279705391489276667901467771423780,
      0.0,
      0.129484966168869693270611432679082,
      0.0]


cdef struct Params:
    double R_o, d_bo, d_bu, chi, h_b, h_u
    double mu, beta_b, beta_u, alpha_b, alpha_u
    double eta_l, eta_n, a_r, b_r, power_ratio
    int m
    bint assoc_only
    int mode  # 0: tbs link, 1: uav link, 2: system


cdef inline double clamp1(double x) nogil:
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


cdef inline double wrap_signed(double x) nogil:
    cdef double y = fmod(x + M_PI, 2.0 * M_PI)
    if y < 0.0:
        y += 2.0 * M_PI
    return y - M_PI


cdef inline double gamma_ccdf(double x, int m) nogil:
    """sum_{k<m} x^k/k! exp(-x)."""
    cdef double term = 1.0, acc = 1.0
    cdef int k
    for k in range(1, m):
        term *= x / k
        acc += term
    return acc * exp(-x)


cdef inline double marginal_pdf(double r, double R_o, double d) nogil:
    cdef double norm = 2.0 / (R_o * R_o)
    cdef double lo, arg
    if r <= 0.0:
        return 0.0
    if d <= 1e-12:
        return norm * r if r <= R_o else 0.0
    lo = fabs(R_o - d)
    if r < lo:
        return norm * r if d < R_o else 0.0
    if r > R_o + d:
        return 0.0
    arg = clamp1((d * d + r * r - R_o * R_o) / (2.0 * d * r))
    return (norm / M_PI) * r * acos(arg)


cdef inline double chord(double d_bu, double r_b, double a) nogil:
    cdef double s = sin(0.5 * a)
    return sqrt((d_bu - r_b) * (d_bu - r_b) + 4.0 * d_bu * r_b * s * s)


cdef void inner_components(double r_b, Params* p, double* out) nogil:
    """The conditional-law integral over r_u for one outer node (4 parts)."""
    cdef double vmin = fabs(p.d_bu - r_b)
    cdef double vmax = p.d_bu + r_b
    cdef double phi_o, chi, a_near, a_far, a_lo, a_hi, d1, d2, n_lo, n_hi
    cdef double seg_lo[3]
    cdef double seg_hi[3]
    cdef double seg_n[3]
    cdef double cuts[4]
    cdef double piece_a[8]
    cdef double piece_b[8]
    cdef double piece_n[8]
    cdef int nseg = 0, npiece = 0, nc, i, s, j
    cdef double lam_l, lam_n, p_br, lo, hi, a, b, mid, n
    cdef double length, near, gap, u0, u1, u, half
    cdef double x, w, c, sphi, dens, wd, d2u, d3, elev, kl, kn
    cdef double d_a, cov_l, cov_n, p_tbs
    cdef bint near_lo, near_hi, uav_l, uav_n

    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    out[3] = 0.0
    if p.d_bo <= 1e-12 or p.d_bo + r_b <= p.R_o + 1e-9:
        phi_o = M_PI
        seg_lo[0] = vmin
        seg_hi[0] = vmax
        seg_n[0] = 2.0
        nseg = 1
    else:
        # Same shading as the circle clipping: an arc that only grazes the
        # hot-spot boundary (or a concentric anchor) contributes nothing.
        if p.d_bo >= r_b + p.R_o - 1e-9 or p.d_bo + p.R_o <= r_b + 1e-9:
            return
        if p.d_bo <= 1e-9:
            return
        phi_o = acos(clamp1((p.d_bo * p.d_bo + r_b * r_b - p.R_o * p.R_o)
                            / (2.0 * p.d_bo * r_b)))
        if phi_o <= 0.0:
            return
        chi = p.chi
        a_near = fabs(wrap_signed(phi_o - chi))
        a_far = fabs(wrap_signed(phi_o + chi))
        a_lo = a_near if a_near < a_far else a_far
        a_hi = a_far if a_near < a_far else a_near
        d1 = chord(p.d_bu, r_b, a_lo)
        d2 = chord(p.d_bu, r_b, a_hi)
        n_lo = 2.0 if fabs(chi) <= phi_o else 0.0
        n_hi = 2.0 if M_PI - fabs(chi) <= phi_o else 0.0
        if d1 - vmin > 1e-12:
            seg_lo[nseg] = vmin
            seg_hi[nseg] = d1
            seg_n[nseg] = n_lo
            nseg += 1
        if d2 - d1 > 1e-12:
            seg_lo[nseg] = d1
            seg_hi[nseg] = d2
            seg_n[nseg] = 1.0
            nseg += 1
        if vmax - d2 > 1e-12:
            seg_lo[nseg] = d2
            seg_hi[nseg] = vmax
            seg_n[nseg] = n_hi
            nseg += 1

    lam_l = pow(p.power_ratio * pow(r_b, p.alpha_b) / p.eta_l, 1.0 / p.alpha_u)
    lam_n = pow(p.power_ratio * pow(r_b, p.alpha_b) / p.eta_n, 1.0 / p.alpha_u)
    p_br = exp(-p.mu * p.beta_b * pow(r_b * r_b + p.h_b * p.h_b, 0.5 * p.alpha_b))

    for s in range(nseg):
        n = seg_n[s]
        lo = seg_lo[s]
        hi = seg_hi[s]
        if n == 0.0 or hi - lo <= 0.0:
            continue
        cuts[0] = lo
        nc = 1
        if lo < lam_n < hi:
            cuts[nc] = lam_n
            nc += 1
        if lo < lam_l < hi and lam_l > lam_n:
            cuts[nc] = lam_l
            nc += 1
        cuts[nc] = hi
        nc += 1
        npiece = 0
        for i in range(nc - 1):
            a = cuts[i]
            b = cuts[i + 1]
            if b - a <= 0.0:
                continue
            near = NEAR_EDGE * (b - a)
            if a - vmin <= near and vmax - b <= near:  # both edges close: halve
                mid = 0.5 * (a + b)
                piece_a[npiece] = a
                piece_b[npiece] = mid
                piece_n[npiece] = n
                npiece += 1
                piece_a[npiece] = mid
                piece_b[npiece] = b
                piece_n[npiece] = n
                npiece += 1
            else:
                piece_a[npiece] = a
                piece_b[npiece] = b
                piece_n[npiece] = n
                npiece += 1
        for i in range(npiece):
            a = piece_a[i]
            b = piece_b[i]
            length = b - a
            near = NEAR_EDGE * length
            near_lo = a - vmin <= near
            near_hi = (not near_lo) and vmax - b <= near
            u0 = 0.0
            u1 = 0.0
            if near_lo:
                gap = a - vmin
                if gap < 0.0:
                    gap = 0.0
                u0 = sqrt(gap)
                u1 = sqrt(b - vmin)
            elif near_hi:
                gap = vmax - b
                if gap < 0.0:
                    gap = 0.0
                u0 = sqrt(gap)
                u1 = sqrt(vmax - a)
            half = 0.5 * length
            uav_l = b <= lam_l
            uav_n = b <= lam_n
            for j in range(15):
                if near_lo:
                    u = u0 + 0.5 * (XGK[j] + 1.0) * (u1 - u0)
                    w = WGK[j] * (u1 - u0) * u
                    x = vmin + u * u
                elif near_hi:
                    u = u0 + 0.5 * (XGK[j] + 1.0) * (u1 - u0)
                    w = WGK[j] * (u1 - u0) * u
                    x = vmax - u * u
                else:
                    w = WGK[j] * half
                    x = a + half * (XGK[j] + 1.0)
                c = clamp1((p.d_bu * p.d_bu + r_b * r_b - x * x)
                           / (2.0 * p.d_bu * r_b))
                sphi = sqrt(1.0 - c * c) if c * c < 1.0 else 0.0
                if sphi <= 0.0:
                    continue
                dens = piece_n[i] * x / (2.0 * phi_o * p.d_bu * r_b * sphi)
                wd = w * dens
                d2u = x * x + p.h_u * p.h_u
                d3 = sqrt(d2u)
                elev = DEG * asin(clamp1(p.h_u / d3)) if d3 > 0.0 else 90.0
                kl = 1.0 / (1.0 + p.a_r * exp(-p.b_r * (elev - p.a_r)))
                kn = 1.0 - kl
                if p.assoc_only:
                    cov_l = 1.0
                    cov_n = 1.0
                    p_tbs = 1.0
                else:
                    d_a = pow(d2u, 0.5 * p.alpha_u)
                    cov_l = gamma_ccdf(p.m * p.beta_u * p.eta_l * d_a, p.m)
                    cov_n = gamma_ccdf(p.m * p.beta_u * p.eta_n * d_a, p.m)
                    p_tbs = p_br
                if uav_l:
                    out[0] += wd * kl * cov_l
                else:
                    out[2] += wd * kl * p_tbs
                if uav_n:
                    out[1] += wd * kn * cov_n
                else:
                    out[3] += wd * kn * p_tbs


cdef void integrand(double r, Params* p, double* out) nogil:
    """Outer integrand: marginal density times the per-distance value (4 comps)."""
    cdef double fm, d_a, d2u, d3, elev, kl
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    out[3] = 0.0
    fm = marginal_pdf(r, p.R_o, p.d_bo if p.mode != 1 else p.d_bu)
    if fm <= 0.0:
        return
    if p.mode == 0:
        d_a = pow(r * r + p.h_b * p.h_b, 0.5 * p.alpha_b)
        out[0] = fm * exp(-p.mu * p.beta_b * d_a)
        return
    if p.mode == 1:
        d2u = r * r + p.h_u * p.h_u
        d3 = sqrt(d2u)
        elev = DEG * asin(clamp1(p.h_u / d3)) if d3 > 0.0 else 90.0
        kl = 1.0 / (1.0 + p.a_r * exp(-p.b_r * (elev - p.a_r)))
        d_a = pow(d2u, 0.5 * p.alpha_u)
        out[0] = fm * kl * gamma_ccdf(p.m * p.beta_u * p.eta_l * d_a, p.m)
        out[1] = fm * (1.0 - kl) * gamma_ccdf(p.m * p.beta_u * p.eta_n * d_a, p.m)
        return
    inner_components(r, p, out)
    out[0] *= fm
    out[1] *= fm
    out[2] *= fm
    out[3] *= fm


cdef int eval_panel(double lo, double hi, bint sing_lo, bint sing_hi,
                    Params* p, double* val4, double* err) nogil:
    cdef double gk[4]
    cdef double gg[4]
    cdef double tmp[4]
    cdef double length = hi - lo, s_, x, w, wgauss
    cdef int j, k
    for k in range(4):
        gk[k] = 0.0
        gg[k] = 0.0
    for j in range(15):
        if sing_lo:
            s_ = 0.5 * (XGK[j] + 1.0)
            x = lo + s_ * s_ * length
            w = WGK[j] * s_ * length
            wgauss = WG[j] * s_ * length
        elif sing_hi:
            s_ = 0.5 * (XGK[j] + 1.0)
            x = hi - s_ * s_ * length
            w = WGK[j] * s_ * length
            wgauss = WG[j] * s_ * length
        else:
            x = lo + 0.5 * length * (XGK[j] + 1.0)
            w = WGK[j] * 0.5 * length
            wgauss = WG[j] * 0.5 * length
        integrand(x, p, tmp)
        for k in range(4):
            gk[k] += w * tmp[k]
            gg[k] += wgauss * tmp[k]
    err[0] = 0.0
    for k in range(4):
        val4[k] = gk[k]
        err[0] += fabs(gk[k] - gg[k])
    return 15


cdef _adaptive(Params* p, double abs_tol, int max_evals):
    """Worst-panel bisection over the marginal support; returns (val4, err)."""
    cdef double plo[MAXPANELS]
    cdef double phi_arr[MAXPANELS]
    cdef bint pslo[MAXPANELS]
    cdef bint pshi[MAXPANELS]
    cdef double perr[MAXPANELS]
    cdef double pval[MAXPANELS][4]
    cdef int npanels = 0, evals = 0, worst, i, k
    cdef double d_anchor = p.d_bo if p.mode != 1 else p.d_bu
    cdef double R_o = p.R_o
    cdef double lo, hi, mid, total_err, werr, width_floor
    cdef bint pshi_save

    # Marginal support panels; when the overlap branch carries square-root
    # endpoints on both sides it is pre-split so no panel has two.
    if d_anchor <= 1e-12:
        plo[0] = 0.0
        phi_arr[0] = R_o
        pslo[0] = False
        pshi[0] = False
        npanels = 1
    else:
        lo = fabs(R_o - d_anchor)
        hi = R_o + d_anchor
        if d_anchor < R_o:
            plo[npanels] = 0.0
            phi_arr[npanels] = lo
            pslo[npanels] = False
            pshi[npanels] = False
            npanels += 1
        if fabs(d_anchor - R_o) > 1e-12:
            mid = 0.5 * (lo + hi)
            plo[npanels] = lo
            phi_arr[npanels] = mid
            pslo[npanels] = True
            pshi[npanels] = False
            npanels += 1
            plo[npanels] = mid
            phi_arr[npanels] = hi
            pslo[npanels] = False
            pshi[npanels] = True
            npanels += 1
        else:
            plo[npanels] = lo
            phi_arr[npanels] = hi
            pslo[npanels] = False
            pshi[npanels] = True
            npanels += 1

    for i in range(npanels):
        evals += eval_panel(plo[i], phi_arr[i], pslo[i], pshi[i], p,
                            &pval[i][0], &perr[i])

    while True:
        total_err = 0.0
        for i in range(npanels):
            total_err += perr[i]
        if total_err <= abs_tol:
            break
        worst = 0
        werr = perr[0]
        for i in range(1, npanels):
            if perr[i] > werr:
                werr = perr[i]
                worst = i
        lo = plo[worst]
        hi = phi_arr[worst]
        width_floor = 1e-14
        if fabs(lo) > 1.0 or fabs(hi) > 1.0:
            width_floor = 1e-14 * (fabs(hi) if fabs(hi) > fabs(lo) else fabs(lo))
        if hi - lo <= width_floor:
            break
        if evals + 30 > max_evals:
            raise QuadratureError(
                f"refinement budget {max_evals} exhausted with error {total_err:.3e} "
                f"(worst panel [{lo}, {hi}] err {werr:.3e})",
                total_error=total_err, worst_panel=(lo, hi), evaluations=evals)
        if npanels + 1 >= MAXPANELS:
            raise QuadratureError(
                f"panel limit {MAXPANELS} reached with error {total_err:.3e}",
                total_error=total_err, worst_panel=(lo, hi), evaluations=evals)
        mid = 0.5 * (lo + hi)
        phi_arr[worst] = mid
        pshi_save = pshi[worst]
        pshi[worst] = False
        evals += eval_panel(lo, mid, pslo[worst], False, p,
                            &pval[worst][0], &perr[worst])
        plo[npanels] = mid
        phi_arr[npanels] = hi
        pslo[npanels] = False
        pshi[npanels] = pshi_save
        evals += eval_panel(mid, hi, False, pshi_save, p,
                            &pval[npanels][0], &perr[npanels])
        npanels += 1

    cdef double total[4]
    total_err = 0.0
    for k in range(4):
        total[k] = 0.0
    for i in range(npanels):
        total_err += perr[i]
        for k in range(4):
            total[k] += pval[i][k]
    return (total[0], total[1], total[2], total[3]), total_err


cdef Params _base_params():
    cdef Params p
    p.R_o = p.d_bo = p.d_bu = p.chi = p.h_b = p.h_u = 0.0
    p.mu = p.beta_b = p.beta_u = p.alpha_b = p.alpha_u = 0.0
    p.eta_l = p.eta_n = p.a_r = p.b_r = 0.0
    p.power_ratio = 1.0
    p.m = 1
    p.assoc_only = False
    p.mode = 0
    return p


def link_coverage_tbs(double R_o, double d_anchor, double h_b, double mu,
                      double beta_b, double alpha_b,
                      double abs_tol=1e-6, int max_evals=100_000):
    """Coverage of the terrestrial link over a uniform hot-spot user."""
    cdef Params p = _base_params()
    p.mode = 0
    p.R_o = R_o
    p.d_bo = d_anchor
    p.h_b = h_b
    p.mu = mu
    p.beta_b = beta_b
    p.alpha_b = alpha_b
    vals, err = _adaptive(&p, abs_tol, max_evals)
    return vals[0], err


def link_coverage_uav(double R_o, double d_anchor, double h_u, int m,
                      double beta_u, double alpha_u, double eta_l, double eta_n,
                      double a_r, double b_r,
                      double abs_tol=1e-6, int max_evals=100_000):
    """Coverage of the aerial access link; LoS/NLoS parts returned separately."""
    cdef Params p = _base_params()
    p.mode = 1
    p.R_o = R_o
    p.d_bu = d_anchor
    p.h_u = h_u
    p.m = m
    p.beta_u = beta_u
    p.alpha_u = alpha_u
    p.eta_l = eta_l
    p.eta_n = eta_n
    p.a_r = a_r
    p.b_r = b_r
    vals, err = _adaptive(&p, abs_tol, max_evals)
    return vals[0] + vals[1], err, vals[0], vals[1]


def system_coverage(double R_o, double d_bo, double d_bu, double chi,
                    double h_b, double h_u, double mu, int m, double beta_b,
                    double beta_u, double alpha_b, double alpha_u,
                    double eta_l, double eta_n, double a_r, double b_r,
                    double power_ratio, bint assoc_only=False,
                    double abs_tol=1e-5, int max_evals=100_000):
    """Joint user-distance integral with ground-distance association.

    Returns (uav_los, uav_nlos, tbs_los, tbs_nlos, error); see the pure
    backend for the full contract.
    """
    if d_bu <= 1e-12:
        raise ValueError("coincident ground projections: integrate the atom case instead")
    cdef Params p = _base_params()
    p.mode = 2
    p.R_o = R_o
    p.d_bo = d_bo
    p.d_bu = d_bu
    p.chi = chi
    p.h_b = h_b
    p.h_u = h_u
    p.mu = mu
    p.m = m
    p.beta_b = beta_b
    p.beta_u = beta_u
    p.alpha_b = alpha_b
    p.alpha_u = alpha_u
    p.eta_l = eta_l
    p.eta_n = eta_n
    p.a_r = a_r
    p.b_r = b_r
    p.power_ratio = power_ratio
    p.assoc_only = assoc_only
    vals, err = _adaptive(&p, abs_tol, max_evals)
    return vals[0], vals[1], vals[2], vals[3], err
