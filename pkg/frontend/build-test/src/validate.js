// Client-side validation mirroring the server's config rules: the
// console refuses to submit anything the server would 400, with the
// same field paths in the error list.
const SIMPLEX_TOL = 1e-9;
function isFiniteNumber(x) {
    return typeof x === "number" && Number.isFinite(x);
}
export function validateScenario(config) {
    const errors = [];
    const fail = (field, message) => errors.push({ field, message });
    if (!isFiniteNumber(config.initial.B0) || config.initial.B0 <= 0) {
        fail("initial.B0", "must be > 0");
    }
    if (!isFiniteNumber(config.initial.R0) || config.initial.R0 <= 0) {
        fail("initial.R0", "must be > 0");
    }
    if (!isFiniteNumber(config.attrition.r) || config.attrition.r < 0) {
        fail("attrition.r", "must be >= 0");
    }
    if (!isFiniteNumber(config.attrition.b) || config.attrition.b < 0) {
        fail("attrition.b", "must be >= 0");
    }
    if (!isFiniteNumber(config.grid.dt) || config.grid.dt <= 0) {
        fail("grid.dt", "must be > 0");
    }
    if (!Number.isInteger(config.grid.n_steps) || config.grid.n_steps < 1) {
        fail("grid.n_steps", "must be an integer >= 1");
    }
    if (config.priors.length === 0) {
        fail("priors", "must be a non-empty array");
    }
    config.priors.forEach((prior, i) => {
        for (const key of ["p_B", "p_R"]) {
            const v = prior[key];
            if (!isFiniteNumber(v) || v < 0 || v > 1) {
                fail(`priors[${i}].${key}`, "must lie in [0, 1]");
            }
        }
        const cop = prior.copula;
        if (cop.kind === "gaussian") {
            if (!isFiniteNumber(cop.rho) || cop.rho <= -1 || cop.rho >= 1) {
                fail(`priors[${i}].copula.rho`, "gaussian copula needs rho in (-1, 1)");
            }
        }
        else if (cop.kind === "clayton") {
            if (!isFiniteNumber(cop.alpha) || cop.alpha <= 0) {
                fail(`priors[${i}].copula.alpha`, "clayton copula needs alpha > 0");
            }
        }
    });
    if (config.weights.some((w) => !isFiniteNumber(w) || w < 0)) {
        fail("weights", "must be nonnegative");
    }
    else if (Math.abs(config.weights.reduce((a, b) => a + b, 0) - 1) > SIMPLEX_TOL) {
        fail("weights", "weights must sum to 1");
    }
    if (config.weights.length !== config.priors.length) {
        fail("weights", `${config.weights.length} weights for ${config.priors.length} priors`);
    }
    const theta = config.preferences.theta;
    if (theta.length !== 3 || theta.some((t) => !isFiniteNumber(t) || t < 0)) {
        fail("preferences.theta", "components must be >= 0");
    }
    else if (Math.abs(theta[0] + theta[1] + theta[2] - 1) > SIMPLEX_TOL) {
        fail("preferences.theta", "theta must sum to 1");
    }
    if (!isFiniteNumber(config.preferences.zeta) || config.preferences.zeta <= 0) {
        fail("preferences.zeta", "must be > 0");
    }
    if (!isFiniteNumber(config.preferences.b_min)) {
        fail("preferences.b_min", "must be a number");
    }
    else if (isFiniteNumber(config.initial.B0) &&
        config.preferences.b_min > config.initial.B0) {
        fail("preferences.b_min", `must be <= B0 = ${config.initial.B0}`);
    }
    if (config.aversion.mode === "tilt") {
        if (!isFiniteNumber(config.aversion.value) || config.aversion.value < 0) {
            fail("aversion.value", "must be >= 0");
        }
    }
    else if (config.aversion.mode === "radius") {
        if (!isFiniteNumber(config.aversion.value) || config.aversion.value <= 0) {
            fail("aversion.value", "must be > 0");
        }
    }
    else {
        fail("aversion.mode", "must be 'tilt' or 'radius'");
    }
    if (!isFiniteNumber(config.prior_floor) || config.prior_floor < 0 || config.prior_floor >= 0.25) {
        fail("prior_floor", "must lie in [0, 0.25)");
    }
    if (config.simulator !== "exact" && config.simulator !== "gaussian") {
        fail("simulator", "must be 'exact' or 'gaussian'");
    }
    if (!isFiniteNumber(config.bracken.p_exp) || config.bracken.p_exp <= 0) {
        fail("bracken.p_exp", "must be > 0");
    }
    if (!isFiniteNumber(config.bracken.q_exp) || config.bracken.q_exp < 0) {
        fail("bracken.q_exp", "must be >= 0");
    }
    const opt = config.optimizer;
    if (!isFiniteNumber(opt.pi_init) || opt.pi_init <= 0 || opt.pi_init > 1) {
        fail("optimizer.pi_init", "must lie in (0, 1]");
    }
    if (!isFiniteNumber(opt.pi_floor) || opt.pi_floor < 0 || opt.pi_floor >= 1) {
        fail("optimizer.pi_floor", "must lie in [0, 1)");
    }
    for (const key of ["a0", "tau", "h", "tol"]) {
        if (!isFiniteNumber(opt[key]) || opt[key] <= 0) {
            fail(`optimizer.${key}`, "must be > 0");
        }
    }
    for (const key of ["mc_paths", "window", "max_iters"]) {
        if (!Number.isInteger(opt[key]) || opt[key] < 1) {
            fail(`optimizer.${key}`, "must be an integer >= 1");
        }
    }
    if (!Number.isInteger(opt.retilt_every) || opt.retilt_every < 0) {
        fail("optimizer.retilt_every", "must be an integer >= 0");
    }
    if (!["auto", "path", "iid"].includes(opt.worstcase_backend)) {
        fail("optimizer.worstcase_backend", "must be one of auto, path, iid");
    }
    if (!Number.isInteger(opt.worstcase_mc_paths) || opt.worstcase_mc_paths < 1000) {
        fail("optimizer.worstcase_mc_paths", "must be an integer >= 1000");
    }
    if (!Number.isInteger(config.seed) || config.seed < 0) {
        fail("seed", "must be a nonnegative integer");
    }
    return errors;
}
export function validatePaths(paths) {
    if (!Number.isInteger(paths) || paths < 1) {
        return [{ field: "paths", message: "must be an integer >= 1" }];
    }
    return [];
}
export function validateGridPoints(points) {
    if (!Number.isInteger(points) || points < 2) {
        return [{ field: "grid_points", message: "must be an integer >= 2" }];
    }
    return [];
}
export function validatePi(pi) {
    if (!isFiniteNumber(pi) || pi < 0 || pi > 1) {
        return [{ field: "pi", message: "must lie in [0, 1]" }];
    }
    return [];
}
