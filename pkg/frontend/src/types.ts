// Mirrors of the server's scenario schema and result payloads.

export type CopulaKind =
  | "independence"
  | "frechet_upper"
  | "frechet_lower"
  | "gaussian"
  | "clayton";

export interface CopulaSpec {
  kind: CopulaKind;
  rho?: number;
  alpha?: number;
}

export interface PriorSpec {
  p_B: number;
  p_R: number;
  copula: CopulaSpec;
}

export interface OptimizerSettings {
  pi_init: number;
  pi_floor: number;
  a0: number;
  tau: number;
  mc_paths: number;
  h: number;
  tol: number;
  window: number;
  max_iters: number;
  retilt_every: number;
  worstcase_backend: "auto" | "path" | "iid";
  worstcase_mc_paths: number;
}

export interface ScenarioConfig {
  initial: { B0: number; R0: number };
  attrition: { r: number; b: number };
  grid: { dt: number; n_steps: number };
  priors: PriorSpec[];
  weights: number[];
  prior_floor: number;
  aversion: { mode: "tilt" | "radius"; value: number };
  preferences: { theta: [number, number, number]; zeta: number; b_min: number };
  simulator: "exact" | "gaussian";
  bracken: { p_exp: number; q_exp: number };
  absorb_at_zero: boolean;
  optimizer: OptimizerSettings;
  seed: number;
}

export interface FieldError {
  field: string;
  message: string;
}

export interface SideFan {
  mean: number[];
  q05: number[];
  q25: number[];
  q75: number[];
  q95: number[];
}

export interface FanSummary {
  times: number[];
  B: SideFan;
  R: SideFan;
}

export interface WorstCaseSummary {
  backend: string;
  kappa: number;
  eta: number | null;
  saturated: boolean;
  barycenter: number[];
  per_step_pmf: number[][];
  weighted_kl: { barycenter: number; worstcase: number };
  search_converged: boolean;
}

export interface SimulateResult {
  kind: "simulate";
  config_hash: string;
  seed: number;
  pi: number;
  simulator: string;
  paths: number;
  fan: FanSummary;
  classic_overlay: { B: number[]; R: number[] };
  worstcase: WorstCaseSummary;
  diagnostics: { clamp_frequency: number };
}

export interface OptimizeResult {
  kind: "optimize";
  config_hash: string;
  seed: number;
  optimal_pi: number;
  objective: { value: number; stderr: number };
  iterations: number;
  converged: boolean;
  status: string;
  history: number[];
  worstcase: WorstCaseSummary;
  fan: FanSummary;
  diagnostics: { clamp_frequency: number; fan_clamp_frequency: number; paths: number };
}

export interface AggregateResult {
  kind: "aggregate";
  config_hash: string;
  pi: number;
  barycenter: number[];
  worstcase: WorstCaseSummary;
}

export interface SweepPoint {
  pi: number;
  objective: number;
  stderr: number;
}

export interface SweepResult {
  kind: "sweep";
  config_hash: string;
  argmax_pi: number;
  points: SweepPoint[];
}
