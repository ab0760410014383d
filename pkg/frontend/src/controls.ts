// Form construction and two-way binding between inputs and the
// scenario config. Validation runs on every edit; action buttons stay
// disabled while the config would be rejected server-side.

import { ConsoleState, ActionKind } from "./state.js";
import { CopulaKind, PriorSpec } from "./types.js";

export interface ActionRequest {
  kind: ActionKind;
  pi: number;
  paths: number;
  gridPoints: number;
}

type ActionHandler = (request: ActionRequest) => void;

function numberInput(
  label: string,
  value: number,
  onChange: (v: number) => void,
  attrs: Partial<{ min: number; max: number; step: number }> = {},
): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  wrap.textContent = label;
  const input = document.createElement("input");
  input.type = "number";
  input.value = String(value);
  if (attrs.min !== undefined) input.min = String(attrs.min);
  if (attrs.max !== undefined) input.max = String(attrs.max);
  if (attrs.step !== undefined) input.step = String(attrs.step);
  input.addEventListener("input", () => onChange(Number(input.value)));
  wrap.appendChild(input);
  return wrap;
}

function selectInput(
  label: string,
  value: string,
  options: string[],
  onChange: (v: string) => void,
): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  wrap.textContent = label;
  const select = document.createElement("select");
  for (const option of options) {
    const el = document.createElement("option");
    el.value = option;
    el.textContent = option;
    el.selected = option === value;
    select.appendChild(el);
  }
  select.addEventListener("change", () => onChange(select.value));
  wrap.appendChild(select);
  return wrap;
}

function fieldset(legend: string, ...children: HTMLElement[]): HTMLElement {
  const set = document.createElement("fieldset");
  const title = document.createElement("legend");
  title.textContent = legend;
  set.appendChild(title);
  children.forEach((c) => set.appendChild(c));
  return set;
}

function priorRow(
  state: ConsoleState,
  index: number,
  refresh: () => void,
): HTMLElement {
  const prior = state.config.priors[index];
  const row = document.createElement("div");
  row.className = "prior-row";
  row.appendChild(
    numberInput(`p_B`, prior.p_B, (v) => { prior.p_B = v; refresh(); },
      { min: 0, max: 1, step: 0.05 }),
  );
  row.appendChild(
    numberInput(`p_R`, prior.p_R, (v) => { prior.p_R = v; refresh(); },
      { min: 0, max: 1, step: 0.05 }),
  );
  row.appendChild(
    selectInput("copula", prior.copula.kind,
      ["independence", "frechet_upper", "frechet_lower", "gaussian", "clayton"],
      (v) => {
        prior.copula = { kind: v as CopulaKind };
        if (v === "gaussian") prior.copula.rho = 0.0;
        if (v === "clayton") prior.copula.alpha = 1.0;
        refresh();
      }),
  );
  if (prior.copula.kind === "gaussian") {
    row.appendChild(
      numberInput("rho", prior.copula.rho ?? 0,
        (v) => { prior.copula.rho = v; refresh(); },
        { min: -0.99, max: 0.99, step: 0.05 }),
    );
  }
  if (prior.copula.kind === "clayton") {
    row.appendChild(
      numberInput("alpha", prior.copula.alpha ?? 1,
        (v) => { prior.copula.alpha = v; refresh(); },
        { min: 0.05, step: 0.1 }),
    );
  }
  row.appendChild(
    numberInput("weight", state.config.weights[index],
      (v) => { state.config.weights[index] = v; refresh(); },
      { min: 0, max: 1, step: 0.05 }),
  );
  const remove = document.createElement("button");
  remove.type = "button";
  remove.textContent = "remove";
  remove.disabled = state.config.priors.length <= 1;
  remove.addEventListener("click", () => {
    state.config.priors.splice(index, 1);
    state.config.weights.splice(index, 1);
    refresh();
  });
  row.appendChild(remove);
  return row;
}

export function renderControls(
  root: HTMLElement,
  state: ConsoleState,
  onAction: ActionHandler,
): () => void {
  const request: ActionRequest = {
    kind: "optimize",
    pi: state.config.optimizer.pi_init,
    paths: 1000,
    gridPoints: 41,
  };

  const form = document.createElement("form");
  form.addEventListener("submit", (e) => e.preventDefault());
  const errorBox = document.createElement("ul");
  errorBox.className = "errors";
  const buttons: HTMLButtonElement[] = [];

  const refresh = () => {
    render();
  };

  const cfg = () => state.config;

  function actionButton(label: string, kind: ActionKind): HTMLButtonElement {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = label;
    button.addEventListener("click", () => onAction({ ...request, kind }));
    buttons.push(button);
    return button;
  }

  function render(): void {
    form.textContent = "";
    buttons.length = 0;
    const c = cfg();

    form.appendChild(
      fieldset(
        "forces and attrition",
        numberInput("B0", c.initial.B0, (v) => { c.initial.B0 = v; refresh(); }, { min: 1 }),
        numberInput("R0", c.initial.R0, (v) => { c.initial.R0 = v; refresh(); }, { min: 1 }),
        numberInput("r (red->blue)", c.attrition.r, (v) => { c.attrition.r = v; refresh(); },
          { min: 0, step: 0.01 }),
        numberInput("b (blue->red)", c.attrition.b, (v) => { c.attrition.b = v; refresh(); },
          { min: 0, step: 0.01 }),
        numberInput("dt", c.grid.dt, (v) => { c.grid.dt = v; refresh(); }, { min: 0.01, step: 0.1 }),
        numberInput("steps", c.grid.n_steps, (v) => { c.grid.n_steps = v; refresh(); }, { min: 1, step: 1 }),
      ),
    );

    const priorsSet = fieldset("expert shock models (trust weights)");
    c.priors.forEach((_, i) => priorsSet.appendChild(priorRow(state, i, refresh)));
    const add = document.createElement("button");
    add.type = "button";
    add.textContent = "add prior";
    add.addEventListener("click", () => {
      const prior: PriorSpec = { p_B: 0.5, p_R: 0.5, copula: { kind: "independence" } };
      c.priors.push(prior);
      c.weights.push(0);
      refresh();
    });
    priorsSet.appendChild(add);
    form.appendChild(priorsSet);

    form.appendChild(
      fieldset(
        "aversion and criteria",
        selectInput("aversion mode", c.aversion.mode, ["tilt", "radius"], (v) => {
          c.aversion.mode = v as "tilt" | "radius";
          refresh();
        }),
        numberInput("aversion value", c.aversion.value,
          (v) => { c.aversion.value = v; refresh(); }, { min: 0, step: 0.01 }),
        numberInput("theta1 (difference)", c.preferences.theta[0],
          (v) => { c.preferences.theta[0] = v; refresh(); }, { min: 0, max: 1, step: 0.05 }),
        numberInput("theta2 (floor margin)", c.preferences.theta[1],
          (v) => { c.preferences.theta[1] = v; refresh(); }, { min: 0, max: 1, step: 0.05 }),
        numberInput("theta3 (reserve)", c.preferences.theta[2],
          (v) => { c.preferences.theta[2] = v; refresh(); }, { min: 0, max: 1, step: 0.05 }),
        numberInput("zeta", c.preferences.zeta,
          (v) => { c.preferences.zeta = v; refresh(); }, { min: 0.01, step: 0.01 }),
        numberInput("B_min", c.preferences.b_min,
          (v) => { c.preferences.b_min = v; refresh(); }, { min: 0 }),
      ),
    );

    form.appendChild(
      fieldset(
        "run settings",
        selectInput("simulator", c.simulator, ["exact", "gaussian"], (v) => {
          c.simulator = v as "exact" | "gaussian";
          refresh();
        }),
        numberInput("seed", c.seed, (v) => { c.seed = v; refresh(); }, { min: 0, step: 1 }),
        numberInput("pi (simulate at)", request.pi,
          (v) => { request.pi = v; }, { min: 0, max: 1, step: 0.05 }),
        numberInput("paths", request.paths, (v) => { request.paths = v; }, { min: 1, step: 100 }),
        numberInput("sweep grid points", request.gridPoints,
          (v) => { request.gridPoints = v; }, { min: 2, step: 1 }),
      ),
    );

    const actions = document.createElement("div");
    actions.className = "actions";
    actions.appendChild(actionButton("Optimize", "optimize"));
    actions.appendChild(actionButton("Sweep", "sweep"));
    actions.appendChild(actionButton("Simulate at pi", "simulate"));
    actions.appendChild(actionButton("Aggregate", "aggregate"));
    form.appendChild(actions);
    form.appendChild(errorBox);
    syncValidity();
  }

  function syncValidity(): void {
    const errors = state.errors();
    errorBox.textContent = "";
    for (const err of errors) {
      const item = document.createElement("li");
      item.textContent = `${err.field}: ${err.message}`;
      errorBox.appendChild(item);
    }
    const blocked = errors.length > 0;
    buttons.forEach((b) => {
      b.disabled = blocked || state.isBusy(b.textContent === "Optimize" ? "optimize"
        : b.textContent === "Sweep" ? "sweep"
        : b.textContent === "Aggregate" ? "aggregate" : "simulate");
    });
  }

  render();
  root.appendChild(form);
  return syncValidity;
}
