// Boot: load server defaults, bind the form, route actions through the
// API client, render results. All numbers come from the API; the
// console computes nothing itself.

import { ApiClient, ApiError } from "./api.js";
import { fanChart, perStepTable, sweepChart, worstcasePanel } from "./charts.js";
import { renderControls, ActionRequest } from "./controls.js";
import { ConsoleState } from "./state.js";
import { validateGridPoints, validatePaths, validatePi } from "./validate.js";

const api = new ApiClient("");

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setStatus(text: string, isError = false): void {
  const box = el("status");
  box.textContent = text;
  box.className = isError ? "status error" : "status";
}

function renderOptimize(state: ConsoleState): void {
  const result = state.results.optimize;
  if (!result) return;
  el("optimal-summary").innerHTML = [
    `<strong>pi* = ${result.optimal_pi.toFixed(4)}</strong>`,
    `objective ${result.objective.value.toFixed(4)} &plusmn; ${result.objective.stderr.toFixed(4)}`,
    `${result.iterations} iterations (${result.status})`,
  ].join(" &middot; ");
  el("fan-pane").innerHTML = fanChart(result.fan, overlayFor(state));
  el("worstcase-pane").innerHTML =
    worstcasePanel(result.worstcase) + perStepTable(result.worstcase.per_step_pmf);
}

function overlayFor(state: ConsoleState): { B: number[]; R: number[] } | null {
  const checkbox = document.getElementById("overlay-classic") as HTMLInputElement | null;
  if (!checkbox || !checkbox.checked) return null;
  return state.results.simulate?.classic_overlay ?? null;
}

async function runAction(state: ConsoleState, request: ActionRequest, sync: () => void) {
  const extraErrors =
    request.kind === "simulate"
      ? [...validatePi(request.pi), ...validatePaths(request.paths)]
      : request.kind === "sweep"
        ? validateGridPoints(request.gridPoints)
        : request.kind === "optimize"
          ? validatePaths(request.paths)
          : [];
  if (extraErrors.length > 0 || !state.isValid()) {
    setStatus("fix the highlighted fields first", true);
    return;
  }
  const token = state.begin(request.kind);
  if (token === null) {
    return; // one request per action kind
  }
  sync();
  setStatus(`running ${request.kind} ...`);
  try {
    const config = structuredClone(state.config);
    let result;
    switch (request.kind) {
      case "simulate":
        result = await api.simulate(config, request.paths, request.pi);
        break;
      case "optimize":
        result = await api.optimize(config, request.paths);
        break;
      case "aggregate":
        result = await api.aggregate(config);
        break;
      case "sweep":
        result = await api.sweep(config, request.gridPoints);
        break;
    }
    if (!state.settle(request.kind, token, result)) {
      return; // stale response lost the race
    }
    setStatus(`${request.kind} done`);
    switch (request.kind) {
      case "optimize":
        renderOptimize(state);
        break;
      case "sweep": {
        const sweep = state.results.sweep!;
        const piStar = state.results.optimize?.optimal_pi ?? sweep.argmax_pi;
        el("sweep-pane").innerHTML = sweepChart(sweep.points, piStar);
        break;
      }
      case "simulate": {
        const sim = state.results.simulate!;
        el("fan-pane").innerHTML = fanChart(sim.fan, overlayFor(state));
        el("worstcase-pane").innerHTML =
          worstcasePanel(sim.worstcase) + perStepTable(sim.worstcase.per_step_pmf);
        break;
      }
      case "aggregate": {
        const agg = state.results.aggregate!;
        el("worstcase-pane").innerHTML =
          worstcasePanel(agg.worstcase) + perStepTable(agg.worstcase.per_step_pmf);
        break;
      }
    }
  } catch (error) {
    if (error instanceof ApiError) {
      setStatus(`server rejected the request: ${error.message}`, true);
    } else {
      setStatus(`request failed: ${error}`, true);
    }
    state.abort(request.kind, token);
  } finally {
    sync();
  }
}

async function boot(): Promise<void> {
  try {
    const health = await api.health();
    const defaults = await api.defaults();
    const state = new ConsoleState(defaults);
    const sync = renderControls(el("controls"), state, (request) => {
      void runAction(state, request, sync);
    });
    setStatus(`ready (server ${health.version}, ${health.kernel_backend} kernels)`);
  } catch (error) {
    setStatus(`cannot reach the API: ${error}`, true);
  }
}

void boot();
