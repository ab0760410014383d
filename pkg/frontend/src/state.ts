// Console state: the scenario being edited, the latest result per
// action, and request sequencing. At most one request per action kind
// is in flight; responses that lost a race are discarded.

import {
  AggregateResult,
  FieldError,
  OptimizeResult,
  ScenarioConfig,
  SimulateResult,
  SweepResult,
} from "./types.js";
import { validateScenario } from "./validate.js";

export type ActionKind = "simulate" | "optimize" | "aggregate" | "sweep";

export interface Results {
  simulate?: SimulateResult;
  optimize?: OptimizeResult;
  aggregate?: AggregateResult;
  sweep?: SweepResult;
}

export class ConsoleState {
  config: ScenarioConfig;
  results: Results = {};
  private counters: Record<ActionKind, number> = {
    simulate: 0,
    optimize: 0,
    aggregate: 0,
    sweep: 0,
  };
  private inFlight: Record<ActionKind, number | null> = {
    simulate: null,
    optimize: null,
    aggregate: null,
    sweep: null,
  };

  constructor(defaults: ScenarioConfig) {
    this.config = structuredClone(defaults);
  }

  /** Validation mirror: empty list means the server would accept it. */
  errors(): FieldError[] {
    return validateScenario(this.config);
  }

  isValid(): boolean {
    return this.errors().length === 0;
  }

  isBusy(kind: ActionKind): boolean {
    return this.inFlight[kind] !== null;
  }

  /**
   * Claim the right to send a request; null means one is already in
   * flight (the caller should keep the action disabled).
   */
  begin(kind: ActionKind): number | null {
    if (this.inFlight[kind] !== null) {
      return null;
    }
    const token = ++this.counters[kind];
    this.inFlight[kind] = token;
    return token;
  }

  /** Record a response; false means it was stale and must be dropped. */
  settle(kind: ActionKind, token: number, result: Results[ActionKind]): boolean {
    if (this.inFlight[kind] !== token) {
      return false;
    }
    this.inFlight[kind] = null;
    (this.results as Record<string, unknown>)[kind] = result;
    return true;
  }

  /** Release the in-flight slot after a failed request. */
  abort(kind: ActionKind, token: number): void {
    if (this.inFlight[kind] === token) {
      this.inFlight[kind] = null;
    }
  }
}
