// Thin JSON client for the compute API. The console performs no model
// math of its own; every number it renders comes from these calls.

import {
  AggregateResult,
  FieldError,
  OptimizeResult,
  ScenarioConfig,
  SimulateResult,
  SweepResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public errors: FieldError[],
  ) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  const response = await fetch(`${base}${path}`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    const payload = await response.json().catch(() => ({}));
    const errors: FieldError[] =
      payload.errors ?? [{ field: "$", message: payload.error ?? `HTTP ${response.status}` }];
    throw new ApiError(response.status, errors);
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  constructor(private base: string = "") {}

  async health(): Promise<{ status: string; version: string; kernel_backend: string }> {
    const response = await fetch(`${this.base}/api/health`);
    return response.json();
  }

  async defaults(): Promise<ScenarioConfig> {
    const response = await fetch(`${this.base}/api/defaults`);
    if (!response.ok) {
      throw new ApiError(response.status, [{ field: "$", message: "defaults unavailable" }]);
    }
    return response.json() as Promise<ScenarioConfig>;
  }

  simulate(config: ScenarioConfig, paths: number, pi: number): Promise<SimulateResult> {
    return post(this.base, "/api/simulate", { config, paths, pi });
  }

  optimize(config: ScenarioConfig, paths?: number): Promise<OptimizeResult> {
    return post(this.base, "/api/optimize", paths ? { config, paths } : { config });
  }

  aggregate(config: ScenarioConfig, pi?: number): Promise<AggregateResult> {
    return post(this.base, "/api/aggregate", pi === undefined ? { config } : { config, pi });
  }

  sweep(config: ScenarioConfig, gridPoints: number): Promise<SweepResult> {
    return post(this.base, "/api/sweep", { config, grid_points: gridPoints });
  }
}
