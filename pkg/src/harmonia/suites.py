"""Verification suites: each module's invariant battery as a list of checks."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from harmonia import boundary, disk, green, jacobi, radial
from harmonia.catalog import ModelSpace
from harmonia.config import Config, parse_grid, parse_list
from harmonia.quadrature import integrate
from harmonia.report import VerificationReport, bound_check, check

SUITES = ("radial", "jacobi", "green", "disk", "poisson", "all")


class SuiteError(ValueError):
    pass


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------- radial

def _radial_tasks(space: ModelSpace, cfg: Config):
    mu_grid = parse_grid(cfg.mu_grid)
    box_grid = parse_grid(cfg.box_grid)
    h = space.mean_curvature_h
    n = space.dim_n

    def density_fd():
        out = []
        for r in (0.25, 0.5, 1.0, 2.0, 4.0):
            step = 1e-3 * r
            f_p = float(radial._richardson_central(space.f, r, step, 1))
            f_pp = float(radial._richardson_central(lambda x: space.density(x)[1], r, step, 1))
            _, d1, d2 = space.density(r)
            out.append(check(f"density_fd_f1@{r:g}", "f' against differences of f", f_p, d1,
                             cfg.tol_density_fd, residual=abs(f_p - d1) / max(abs(d1), 1.0)))
            out.append(check(f"density_fd_f2@{r:g}", "f'' against differences of f'", f_pp, d2,
                             cfg.tol_density_fd, residual=abs(f_pp - d2) / max(abs(d2), 1.0)))
        return out

    def mean_curvature():
        grid = np.linspace(0.1, 40.0, 400)
        d = space.log_derivative(grid)
        out = [bound_check("logderiv_monotone", "f'/f nonincreasing (max increase)",
                           float(max(0.0, np.max(np.diff(d)))), 1e-12)]
        if h > 0:
            out.append(check("logderiv_limit", "f'/f(40) against h", float(d[-1]), h, 1e-6))
        return out

    def mu_props():
        rep = radial.check_mu_properties(space, mu_grid, cfg.fd_step)
        return [bound_check(f"mu_{key}", f"mu property violation: {key}", val, cfg.tol_mu)
                for key, val in rep.values.items()]

    def mu_ode():
        return [bound_check("mu_ode", "max |mu' + (f'/f) mu - 1|",
                            radial.mu_ode_residual(space, mu_grid), cfg.tol_mu_ode)]

    def hv():
        return [bound_check("hv_radial", "max |(mu' + (f'/f) mu)'|",
                            radial.hv_radial_residual(space, box_grid), cfg.tol_hv)]

    def box():
        rep = radial.check_density_inequality(space, box_grid)
        lams = {lam for lam, _ in space.curvature_eigen}
        if len(lams) == 1:
            return [bound_check("box_equality", "|-f^{2/(n-1)} (f'/f)' - (n-1)| (equality case)",
                                rep["max_abs_residual"], cfg.tol_equality)]
        mn = rep["min_residual"]
        return [check("box_strict", "min of -f^{2/(n-1)} (f'/f)' - (n-1) (strict case)", mn,
                      cfg.strict_margin, 0.0, residual=max(0.0, cfg.strict_margin - mn))]

    def eigen_and_curv():
        out = []
        if h > 0:
            out.append(bound_check("sphere_eigenvalue_decay", "-(f'/f)'(30)",
                                   float(radial.sphere_eigenvalue(space, 30.0)), 1e-10))
        if n >= 3 and h > 0:
            s = float(radial.sphere_scalar_curvature(space, 40.0))
            ho = radial.horosphere_scalar_curvature(space)
            out.append(check("scal_sphere_limit", "sphere scalar curvature at 40 against horosphere",
                             s, ho, 1e-6))
        mono = radial.spherical_mean_check(space, radial.mu_function(space), box_grid)
        out.append(bound_check("mu_monotone", "mu nondecreasing (radial mean value inequality)",
                               mono["monotone_violation"], 1e-12))
        return out

    return [density_fd, mean_curvature, mu_props, mu_ode, hv, box, eigen_and_curv]


def _radial_rows(space: ModelSpace, cfg: Config):
    grid = parse_grid(cfg.box_grid)
    grid = grid[grid > 0]
    rows = []
    n = space.dim_n
    m = radial.mu(space, grid)
    ode = radial._richardson_central(lambda x: radial.mu_odd(space, x), grid, cfg.fd_step, 1) \
        + space.log_derivative(grid) * m
    box = -np.exp(2.0 * space.log_density(grid) / (n - 1)) * space.log_derivative_prime(grid)
    for i, r in enumerate(grid):
        rows.append((r, "mu", m[i], math.nan, math.nan))
        rows.append((r, "mu_ode", ode[i], 1.0, ode[i] - 1.0))
        rows.append((r, "box", box[i], n - 1, box[i] - (n - 1)))
    return rows


# ---------------------------------------------------------------- jacobi

def _jacobi_tasks(space: ModelSpace, cfg: Config):
    R = jacobi.curvature_matrix(space.curvature_eigen)
    negdef = bool(np.all(np.linalg.eigvalsh(R) < 0))

    def short():
        return jacobi.integrate(R, cfg.jacobi_tmax, cfg.ode_step)

    def conservation():
        traj = short()
        floor = jacobi.wronskian_rounding_floor(traj)
        return [bound_check("wronskian_drift", "max |W(A,B) - I| / t (tolerance plus rounding floor)",
                            jacobi.wronskian_drift(traj), cfg.tol_wronskian + floor),
                bound_check("riccati_symmetry", "max |A'A^-1 - (A'A^-1)^T|", jacobi.symmetry_defect(traj),
                            cfg.tol_wronskian)]

    def identities():
        traj = short()
        out = []
        for s, t in ((0.5, 1.0), (1.0, 2.0), (0.5, 2.5)):
            out.append(bound_check(f"det_identity@{s:g},{t:g}", "det(Q(s)-Q(t)) - f(t-s)/(f(t)f(s))",
                                   jacobi.check_det_identity(traj, space.f, s, t), cfg.tol_det))
        for t in (1.0, 2.0):
            tr = jacobi.riccati_trace(traj, t)
            out.append(check(f"riccati_trace@{t:g}", "tr(A'A^-1) against f'/f", tr,
                             float(space.log_derivative(t)), 1e-7))
        ts = np.linspace(0.1, cfg.jacobi_tmax, 50)
        worst = max(_rel(float(np.linalg.det(traj.state_at(t)[0])), float(space.f(t))) for t in ts)
        out.append(bound_check("detA_density", "relative |det A - f| on [0.1, tmax]", worst, 1e-8))
        return out

    def stable():
        if not negdef:
            return []
        traj = jacobi.integrate(R, cfg.stable_horizon, cfg.ode_step)
        out = []
        U = jacobi.stable_riccati(traj, 2.0, cfg.stable_horizon)
        out.append(check("stable_trace", "-tr(S'S^-1) at t=2 against h", float(-np.trace(U)),
                         space.mean_curvature_h, 1e-6))
        for t in (1.0, 2.0):
            out.append(bound_check(f"jacobi_identity@{t:g}", "A'A^-1 - S'S^-1 identity",
                                   jacobi.check_jacobi_identity(traj, t, cfg.stable_horizon), cfg.tol_jacid))
        return out

    return [conservation, identities, stable]


def _jacobi_rows(space: ModelSpace, cfg: Config):
    R = jacobi.curvature_matrix(space.curvature_eigen)
    traj = jacobi.integrate(R, cfg.jacobi_tmax, cfg.ode_step)
    W = traj.wronskian()
    rows = []
    for t in np.arange(0.5, cfg.jacobi_tmax + 1e-9, 0.5):
        k = int(round(t / cfg.ode_step))
        dA = float(np.linalg.det(traj.A[k]))
        f = float(space.f(t))
        rows.append((t, "detA", dA, f, dA / f - 1.0))
        rows.append((t, "wronskian", float(np.max(np.abs(W[k] - np.eye(traj.dim)))), 0.0,
                     float(np.max(np.abs(W[k] - np.eye(traj.dim))))))
        tr = jacobi.riccati_trace(traj, t)
        ref = float(space.log_derivative(t))
        rows.append((t, "riccati_trace", tr, ref, tr - ref))
    return rows


# ---------------------------------------------------------------- green

def green_closed_form(space: ModelSpace):
    n = space.dim_n
    if space.name == "euclidean" and n >= 3:
        return lambda r: 1.0 / ((n - 2) * space.omega * r ** (n - 2))
    if space.name == "real_hyperbolic" and n == 2:
        return lambda r: math.log(1.0 / math.tanh(r / 2)) / (2 * math.pi)
    if space.name == "real_hyperbolic" and n == 3:
        return lambda r: (1.0 / math.tanh(r) - 1.0) / (4 * math.pi)
    return None


def _green_tasks(space: ModelSpace, cfg: Config):
    k = green.green_kernel(space, cfg.green_cut)
    h = space.mean_curvature_h

    def derivative():
        out = []
        for r in (0.5, 1.0, 2.0, 5.0):
            step = 1e-3 * r
            dd = lambda s: (k(r + s) - k(r - s)) / (2 * s)  # noqa: E731
            fd = (4 * dd(step / 2) - dd(step)) / 3
            ref = float(k.derivative(r))
            out.append(check(f"green_derivative@{r:g}", "G' against -beta/f", fd, ref, 1e-8,
                             residual=_rel(fd, ref)))
        G = k.radial_function()
        grid = np.linspace(0.2, 10.0, 50)
        lap = radial.radial_laplacian(space, G, grid)
        out.append(bound_check("green_harmonic", "max |Lap G| on [0.2, 10]", float(np.max(np.abs(lap))), 1e-7))
        return out

    def fundamental():
        return [bound_check("green_fundamental", "|omega_n int G Lap(phi) f + phi(0)| for the bump",
                            green.verify_fundamental(k, green.bump()), cfg.tol_green)]

    def martin():
        a = cfg.martin_a
        if h > 0:
            val = green.martin_limit(k, a, cfg.martin_s)
            return [check("martin_limit", "G(s+a)/G(s) against exp(-h a)", val, math.exp(-h * a),
                          cfg.tol_martin)]
        val = green.martin_limit(k, a, 1e4)
        return [check("martin_limit", "G(s+a)/G(s) at s=1e4 against 1", val, 1.0, 1e-3)]

    def closed():
        ref = green_closed_form(space)
        if ref is None:
            return []
        return [check(f"green_closed@{r:g}", "G against the closed form", k(r), ref(r), 1e-10,
                      residual=_rel(k(r), ref(r))) for r in (0.5, 1.0, 2.0, 5.0)]

    return [derivative, fundamental, martin, closed]


def _green_rows(space: ModelSpace, cfg: Config):
    k = green.green_kernel(space, cfg.green_cut)
    ref = green_closed_form(space)
    rows = []
    for r in np.arange(0.5, 10.0 + 1e-9, 0.5):
        g = k(r)
        rr = ref(r) if ref else math.nan
        rows.append((r, "green", g, rr, g - rr))
    return rows


# ---------------------------------------------------------------- disk

def _random_points(rng, count, radius=0.9):
    return np.sqrt(rng.uniform(0, radius**2, count)) * np.exp(2j * np.pi * rng.uniform(size=count))


def _disk_tasks(cfg: Config):
    def distances():
        rng = np.random.default_rng(cfg.seed)
        pts = _random_points(rng, 20)
        out = []
        ref = integrate(lambda x: 2.0 / (1 - x**2), -0.5, 0.5)
        out.append(check("distance_metric", "d(0.5,-0.5) against metric length quadrature",
                         disk.distance(0.5, -0.5), ref, 1e-12))
        worst = max(abs(disk.distance(p, disk.geodesic_ray(p, 1.3, 2.0)) - 2.0) for p in pts)
        out.append(bound_check("geodesic_ray_speed", "|d(p, ray(p, v, 2)) - 2|", worst, 1e-10))
        norms = [disk.hyperbolic_gradient_norm(lambda z: disk.busemann(0.7, z), p) for p in pts]
        out.append(bound_check("busemann_gradient", "max ||grad b| - 1|",
                               float(max(abs(x - 1) for x in norms)), 1e-6))
        lim = max(abs(disk.busemann_limit(0.7, p, 30.0) - disk.busemann(0.7, p)) for p in pts)
        out.append(bound_check("busemann_limit", "|d(z, c(30)) - 30 - b(z)|", lim, cfg.tol_disk))
        mass = max(abs(boundary.harmonic_measure_mass(p) - 1) for p in pts)
        out.append(bound_check("harmonic_mass", "|(1/2pi) int exp(-b) - 1|", mass, 1e-12))
        return out

    def gromov():
        rng = np.random.default_rng(cfg.seed + 1)
        out = []
        worst_low, worst_high = 0.0, 0.0
        for _ in range(20):
            x, y, p = _random_points(rng, 3, 0.95)
            gp = disk.gromov_product(x, y, p)
            dg = disk.distance_to_geodesic(p, x, y)
            worst_low = max(worst_low, gp - dg)
            worst_high = max(worst_high, dg - gp - 32 * cfg.delta)
        out.append(bound_check("gromov_lower", "(x,y)_p - d(p, [x,y])", worst_low, 1e-9))
        out.append(bound_check("gromov_upper", "d(p, [x,y]) - (x,y)_p - 32 delta", worst_high, 0.0))
        thin = max(disk.triangle_thinness(*_random_points(rng, 3, 0.99), samples=120) for _ in range(50))
        out.append(check("triangle_thinness", "largest sampled thinness against delta", thin, cfg.delta, 0.0,
                         residual=max(0.0, thin - cfg.delta)))
        return out

    def sphere_map():
        out = []
        _, s = disk.sphere_hit(0, 0.2, 0.0, 3.0)
        out.append(check("sphere_hit_collinear", "s against 3 - d(0, 0.2)", s, 3 - 2 * math.atanh(0.2), 1e-10))
        pt, _ = disk.sphere_hit(0, 0.2, math.pi / 2, 3.0)
        out.append(check("sphere_hit_generic", "d(p, F_t v) against t", disk.distance(0, pt), 3.0, 1e-10))
        v, e = math.pi / 2, 1e-4
        fd = abs(disk.bt_map(0, 0.2, v + e, 3.0) - disk.bt_map(0, 0.2, v - e, 3.0)) / (2 * e)
        out.append(check("jacobian_fd", "Jac B_t against differences of B_t", disk.jacobian_Bt(0, 0.2, v, 3.0),
                         fd, cfg.tol_jacobian))
        out.append(bound_check("change_of_variables", "int g(B_t) Jac - int g, g = cos, t = 4",
                               disk.change_of_variables_residual(0, 0.2, 4.0), cfg.tol_jacobian))
        return out

    def divergence():
        t = np.linspace(1.0, 20.0, 96)
        a = np.linspace(1e-3, math.pi, 200)
        T, A = np.meshgrid(t, a)
        gap = disk.divergence_rate(T, cfg.a_const) * A - disk.divergence_actual(A, T)
        return [bound_check("divergence_bound", "max of a(t) alpha - d(c_v(t), c_w(t)) on [1, 20]",
                            float(np.max(gap)), 0.0)]

    return [distances, gromov, sphere_map, divergence]


def divergence_rows(cfg: Config, t_grid=None, alphas=None):
    t_grid = np.arange(1.0, 20.0 + 1e-9, 1.0) if t_grid is None else np.asarray(t_grid, dtype=float)
    alphas = [math.pi / 4, math.pi / 2, math.pi] if alphas is None else alphas
    rows = []
    for t in t_grid:
        for a in alphas:
            actual, bound = disk.divergence_check(a, t, cfg.a_const)
            rows.append((t, "divergence", actual, bound, actual - bound))
    return rows


# ---------------------------------------------------------------- poisson

def _poisson_tasks(cfg: Config):
    rng_pts = _random_points(np.random.default_rng(cfg.seed + 2), 20, 0.9)

    def dirichlet():
        out = []
        ones = max(abs(boundary.dirichlet_solve(lambda t: np.ones_like(t), z, cfg.nodes) - 1.0) for z in rng_pts)
        out.append(bound_check("dirichlet_constant", "|H_1 - 1|", ones, 0.0))
        H = boundary.dirichlet_solve(np.cos, rng_pts, cfg.nodes, adaptive=False)
        out.append(bound_check("dirichlet_cos", "max |H_cos(z) - Re z|, |z| <= 0.9",
                               float(np.max(np.abs(H - rng_pts.real))), cfg.tol_dirichlet))
        H2 = boundary.dirichlet_solve(lambda t: np.cos(2 * t), rng_pts, cfg.nodes)
        out.append(bound_check("max_principle", "H_cos2 outside [-1, 1]",
                               float(max(0.0, np.max(np.abs(H2)) - 1.0)), 0.0))
        lap = 0.0
        for k in (1, 2, 3):
            u = lambda z, k=k: boundary.dirichlet_solve(lambda t: np.cos(k * t), z, cfg.nodes)  # noqa: E731
            lap = max(lap, max(abs(disk.hyperbolic_laplacian_fd(u, z)) for z in rng_pts))
        out.append(bound_check("dirichlet_harmonic", "max |hyperbolic Laplacian| by differences", lap,
                               cfg.tol_laplacian))
        theta = np.linspace(0.0, 2 * np.pi, 9)[:-1]
        for name, phi in (("cos", np.cos), ("sin2", lambda t: np.sin(t) ** 2)):
            edge = boundary.dirichlet_solve(phi, cfg.boundary_radius * np.exp(1j * theta), cfg.nodes)
            out.append(bound_check(f"boundary_convergence_{name}",
                                   f"|H(r xi) - phi(xi)| at r = {cfg.boundary_radius}",
                                   float(np.max(np.abs(edge - phi(theta)))), cfg.tol_boundary))
        return out

    def measures():
        out = []
        out.append(bound_check("appl2_identity", "vector identity for int e^{-b_w} w",
                               max(boundary.appl2_residual(z, cfg.nodes) for z in rng_pts), 1e-6))
        out.append(bound_check("rn_cocycle", "Radon-Nikodym chain rule",
                               boundary.cocycle_residual(rng_pts[0], rng_pts[1], rng_pts[2]), 1e-10))
        vm = boundary.visibility_measure(0.5, cfg.nodes)
        out.append(check("visibility_density", "weight at xi = 1 relative to uniform for p = 0.5",
                         vm.weights[0] * cfg.nodes, 3.0, 1e-9))
        out.append(check("visibility_mass", "total visibility mass", math.fsum(vm.weights), 1.0, 1e-12))
        return out

    def ball_model():
        pts = _random_points(np.random.default_rng(cfg.seed + 3), 100, 0.95)
        F = boundary.ball_model_map(pts)
        err = float(max(np.max(np.abs(F[:, 0] - pts.real)), np.max(np.abs(F[:, 1] - pts.imag))))
        return [bound_check("ball_model", "max |F(z) - z| componentwise", err, 1e-10),
                bound_check("hv_origin", "|h_v(0)|", abs(boundary.h_v(1.0, 0.0)), 0.0)]

    def gradient():
        hv = lambda z: boundary.h_v(1.0, z)  # noqa: E731
        u2 = lambda z: boundary.dirichlet_solve(lambda t: np.cos(2 * t), np.asarray(z), cfg.nodes)  # noqa: E731
        out = []
        for name, u, p, a, r in (("hv_e1", hv, 0.0, 0.0, 1.0), ("dirichlet_cos2_e2", u2, 0.2, math.pi / 2, 0.8),
                                 ("dirichlet_cos2_e1", u2, 0.2, 0.0, 0.8)):
            lhs, rhs, res = boundary.gradient_integral_check(u, p, a, r)
            out.append(check(f"gradient_{name}", "<grad u, v> against the sphere integral", lhs, rhs,
                             cfg.tol_gradient, residual=res))
        return out

    def mean_value():
        arcs = parse_list(cfg.arcs)
        H = lambda z: boundary.dirichlet_solve(np.cos, np.asarray(z), cfg.nodes)  # noqa: E731
        avg = boundary.mean_value_at_infinity(H, 0.0, arcs)
        ref = np.array([1 - (2 / L) * math.atan(L / 2) for L in arcs])
        err = np.abs(1.0 - avg)
        return [bound_check("meanvalue_horocycle", "averages against the horocycle closed form",
                            float(np.max(np.abs(avg - ref))), 1e-6),
                bound_check("meanvalue_monotone", "largest increase of |average - 1|",
                            float(max(0.0, np.max(np.diff(err)))) if len(err) > 1 else 0.0, 0.0)]

    return [dirichlet, measures, ball_model, gradient, mean_value]


# ---------------------------------------------------------------- runner

def suite_tasks(suite: str, space: ModelSpace, cfg: Config):
    if suite not in SUITES:
        raise SuiteError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    parts = SUITES[:-1] if suite == "all" else (suite,)
    tasks = []
    for part in parts:
        if part == "radial":
            tasks += [(part, t) for t in _radial_tasks(space, cfg)]
        elif part == "jacobi":
            tasks += [(part, t) for t in _jacobi_tasks(space, cfg)]
        elif part == "green":
            tasks += [(part, t) for t in _green_tasks(space, cfg)]
        elif part == "disk":
            tasks += [(part, t) for t in _disk_tasks(cfg)]
        else:
            tasks += [(part, t) for t in _poisson_tasks(cfg)]
    return tasks


def run_suite(suite: str, space: ModelSpace, cfg: Config | None = None, jobs: int = 1) -> VerificationReport:
    """Run a suite; checks execute in parallel when jobs > 1, assembly stays ordered."""
    cfg = cfg or Config()
    tasks = suite_tasks(suite, space, cfg)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda item: item[1](), tasks))
    else:
        results = [fn() for _, fn in tasks]
    checks = []
    for (part, _), res in zip(tasks, results):
        for c in res:
            checks.append(type(c)(f"{part}.{c.id}", c.description, c.value, c.reference, c.residual, c.tolerance))
    info = {"name": space.name, "dim_n": space.dim_n,
            "curvature_eigen": [list(p) for p in space.curvature_eigen]}
    return VerificationReport(suite, checks, config=cfg.snapshot(), space=info)


def suite_rows(suite: str, space: ModelSpace, cfg: Config):
    """Per-point table (r or t, quantity, value, reference, residual) for CSV export."""
    if suite == "radial":
        return _radial_rows(space, cfg)
    if suite == "jacobi":
        return _jacobi_rows(space, cfg)
    if suite == "green":
        return _green_rows(space, cfg)
    if suite == "disk":
        return divergence_rows(cfg)
    return []
