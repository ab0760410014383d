import assert from "node:assert/strict";
import { test } from "node:test";

import { ScenarioConfig } from "../src/types.js";
import {
  validateGridPoints,
  validatePaths,
  validatePi,
  validateScenario,
} from "../src/validate.js";

export function referenceConfig(): ScenarioConfig {
  return {
    initial: { B0: 100, R0: 80 },
    attrition: { r: 0.08, b: 0.1 },
    grid: { dt: 1, n_steps: 6 },
    priors: [
      { p_B: 0.7, p_R: 0.5, copula: { kind: "independence" } },
      { p_B: 0.5, p_R: 0.6, copula: { kind: "frechet_lower" } },
    ],
    weights: [0.6, 0.4],
    prior_floor: 1e-9,
    aversion: { mode: "tilt", value: 0.01 },
    preferences: { theta: [0.5, 0.3, 0.2], zeta: 0.05, b_min: 60 },
    simulator: "exact",
    bracken: { p_exp: 1, q_exp: 0.05 },
    absorb_at_zero: true,
    optimizer: {
      pi_init: 0.5,
      pi_floor: 0,
      a0: 0.1,
      tau: 50,
      mc_paths: 256,
      h: 1e-20,
      tol: 1e-4,
      window: 20,
      max_iters: 2000,
      retilt_every: 0,
      worstcase_backend: "auto",
      worstcase_mc_paths: 4096,
    },
    seed: 1234,
  };
}

test("reference config validates clean", () => {
  assert.deepEqual(validateScenario(referenceConfig()), []);
});

test("weights off the simplex are refused", () => {
  const config = referenceConfig();
  config.weights = [0.5, 0.6];
  const errors = validateScenario(config);
  assert.ok(errors.some((e) => e.field === "weights" && e.message.includes("sum to 1")));
});

test("theta off the simplex is refused", () => {
  const config = referenceConfig();
  config.preferences.theta = [0.5, 0.3, 0.1];
  assert.ok(validateScenario(config).some((e) => e.field === "preferences.theta"));
  config.preferences.theta = [1.2, -0.1, -0.1];
  assert.ok(validateScenario(config).some((e) => e.field === "preferences.theta"));
});

test("strength floor above initial strength is refused", () => {
  const config = referenceConfig();
  config.preferences.b_min = 150;
  assert.ok(validateScenario(config).some((e) => e.field === "preferences.b_min"));
});

test("copula parameters are checked per kind", () => {
  const config = referenceConfig();
  config.priors[0].copula = { kind: "gaussian" };
  assert.ok(validateScenario(config).some((e) => e.field === "priors[0].copula.rho"));
  config.priors[0].copula = { kind: "gaussian", rho: 1.0 };
  assert.ok(validateScenario(config).some((e) => e.field === "priors[0].copula.rho"));
  config.priors[0].copula = { kind: "clayton", alpha: 0 };
  assert.ok(validateScenario(config).some((e) => e.field === "priors[0].copula.alpha"));
});

test("marginal probabilities restricted to the unit interval", () => {
  const config = referenceConfig();
  config.priors[1].p_B = 1.2;
  assert.ok(validateScenario(config).some((e) => e.field === "priors[1].p_B"));
});

test("weight count must match prior count", () => {
  const config = referenceConfig();
  config.weights = [1.0];
  assert.ok(validateScenario(config).some((e) => e.field === "weights"));
});

test("all problems reported at once", () => {
  const config = referenceConfig();
  config.weights = [0.5, 0.6];
  config.preferences.zeta = -1;
  config.grid.n_steps = 2.5;
  const fields = new Set(validateScenario(config).map((e) => e.field));
  assert.ok(fields.has("weights"));
  assert.ok(fields.has("preferences.zeta"));
  assert.ok(fields.has("grid.n_steps"));
});

test("request-level fields validated", () => {
  assert.equal(validatePaths(100).length, 0);
  assert.equal(validatePaths(0).length, 1);
  assert.equal(validateGridPoints(1).length, 1);
  assert.equal(validatePi(0.5).length, 0);
  assert.equal(validatePi(1.5).length, 1);
});
