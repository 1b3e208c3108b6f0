// Browser shell: wires the pure modules to the DOM. All displayed numbers
// are raw fields from the last API responses; this module only formats
// layout, never values.

import { ApiClient, ApiError } from "./api.js";
import { buildScatter, renderSvg } from "./scatter.js";
import {
  DEFAULT_STATE,
  MAX_DRAFT_ATOMS,
  ViewState,
  addDraftAtom,
  decodeViewState,
  encodeViewState,
} from "./state.js";
import { metricsDisplay } from "./metrics.js";
import { runConstrainedRerun } from "./rerun.js";
import type {
  Atom,
  ConstraintMetrics,
  FeaturesPayload,
  TrialRecord,
  VerdictFilter,
} from "./types.js";

const API_BASE = (window as unknown as { MT_API_BASE?: string }).MT_API_BASE
  ?? `${location.protocol}//${location.hostname}:8765`;

const client = new ApiClient(API_BASE);

let state: ViewState = { ...DEFAULT_STATE, ...decodeViewState(location.search.slice(1)) };
let features: FeaturesPayload | null = null;
let lastMetrics: ConstraintMetrics | null = null;
let trialsById = new Map<string, TrialRecord>();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function syncUrl(): void {
  history.replaceState(null, "", `?${encodeViewState(state)}`);
}

function toast(message: string, retry?: () => void): void {
  const box = el<HTMLDivElement>("toast");
  box.textContent = message;
  box.classList.add("visible");
  if (retry) {
    const button = document.createElement("button");
    button.textContent = "retry";
    button.onclick = () => {
      box.classList.remove("visible");
      retry();
    };
    box.appendChild(button);
  }
  setTimeout(() => box.classList.remove("visible"), 6000);
}

async function loadCampaigns(): Promise<void> {
  const campaigns = await client.listCampaigns();
  const select = el<HTMLSelectElement>("campaign-select");
  select.innerHTML = "";
  for (const c of campaigns) {
    const option = document.createElement("option");
    option.value = c.id;
    option.textContent = `${c.id} (${c.trial_count ?? "?"} trials${c.parent_id ? ", child" : ""})`;
    select.appendChild(option);
  }
  if (!state.campaign && campaigns.length) state.campaign = campaigns[0]!.id;
  if (state.campaign) select.value = state.campaign;
}

async function loadPairs(): Promise<void> {
  if (!state.campaign) return;
  const detail = await client.getCampaign(state.campaign);
  const pairs = new Map<string, { sut: string; mr: string; status: string }>();
  for (const v of detail.constraints?.verdicts ?? []) {
    pairs.set(`${v.sut}:${v.mr}`, { sut: v.sut, mr: v.mr, status: v.status });
  }
  if (!pairs.size) {
    const page = await client.getTrials(state.campaign, { limit: 1000 });
    for (const t of page.trials) {
      pairs.set(`${t.sut_id}:${t.mr_id}`, { sut: t.sut_id, mr: t.mr_id, status: "" });
    }
  }
  const select = el<HTMLSelectElement>("pair-select");
  select.innerHTML = "";
  for (const [key, p] of pairs) {
    const option = document.createElement("option");
    option.value = key;
    option.textContent = p.status ? `${key} [${p.status}]` : key;
    select.appendChild(option);
  }
  if (!state.sut && pairs.size) {
    const first = pairs.values().next().value!;
    state.sut = first.sut;
    state.mr = first.mr;
  }
  if (state.sut && state.mr) select.value = `${state.sut}:${state.mr}`;
}

function fillAxisSelectors(): void {
  if (!features) return;
  for (const [id, current] of [["x-axis", state.xAxis], ["y-axis", state.yAxis]] as const) {
    const select = el<HTMLSelectElement>(id);
    select.innerHTML = "";
    for (const name of features.numeric_features) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
    if (features.numeric_features.includes(current)) select.value = current;
  }
  if (!features.numeric_features.includes(state.xAxis)) {
    state.xAxis = features.numeric_features[0] ?? state.xAxis;
  }
  if (!features.numeric_features.includes(state.yAxis)) {
    state.yAxis = features.numeric_features[1] ?? features.numeric_features[0] ?? state.yAxis;
  }
  const featureSelect = el<HTMLSelectElement>("atom-feature");
  featureSelect.innerHTML = "";
  for (const name of [...features.numeric_features, ...features.flag_features]) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    featureSelect.appendChild(option);
  }
}

async function loadFeatures(): Promise<void> {
  if (!state.campaign || !state.sut || !state.mr) return;
  const seq = client.gate.begin("features");
  const payload = await client.getFeatures(state.campaign, state.sut, state.mr);
  if (!client.gate.isCurrent("features", seq)) return; // stale response
  features = payload;
  const page = await client.getTrials(state.campaign, {
    sut: state.sut,
    mr: state.mr,
    limit: 1000,
  });
  trialsById = new Map(page.trials.map((t) => [t.trial_id, t]));
  fillAxisSelectors();
}

function renderScatterPanel(): void {
  const host = el<HTMLDivElement>("scatter");
  if (!features) {
    host.innerHTML = "<p class='empty-state'>select a campaign and pair</p>";
    return;
  }
  const inRegion = lastMetrics ? new Set(lastMetrics.in_region_trial_ids) : null;
  const view = buildScatter(features.rows, state.xAxis, state.yAxis, state.verdictFilter, inRegion);
  host.innerHTML = renderSvg(view, state.xAxis, state.yAxis);
  el<HTMLSpanElement>("skipped-note").textContent =
    view.skipped ? `${view.skipped} trials lack these features` : "";
  for (const circle of host.querySelectorAll("circle[data-trial-id]")) {
    circle.addEventListener("click", () => {
      const id = circle.getAttribute("data-trial-id")!;
      showTrial(id);
    });
  }
}

function showTrial(trialId: string): void {
  const record = trialsById.get(trialId);
  el<HTMLPreElement>("trial-detail").textContent = record
    ? JSON.stringify(record, null, 2)
    : `trial ${trialId} not in the loaded page`;
}

function renderDraft(): void {
  const list = el<HTMLUListElement>("draft-atoms");
  list.innerHTML = "";
  state.draft.forEach((atom, ix) => {
    const item = document.createElement("li");
    item.textContent = `${atom.feature} ${atom.op === "eq" ? "=" : atom.op === "ge" ? ">=" : "<="} ${atom.value}`;
    const remove = document.createElement("button");
    remove.textContent = "x";
    remove.onclick = () => {
      state.draft = state.draft.filter((_, i) => i !== ix);
      lastMetrics = null;
      renderAll();
    };
    item.appendChild(remove);
    list.appendChild(item);
  });
  el<HTMLSpanElement>("draft-cap-note").textContent =
    `(max ${MAX_DRAFT_ATOMS} atoms, mirroring the miner's search depth)`;
}

function renderMetrics(): void {
  const panel = el<HTMLDListElement>("metrics");
  if (!lastMetrics) {
    panel.innerHTML = "<dt>metrics</dt><dd>evaluate a draft to see them</dd>";
    return;
  }
  // raw response values on purpose: the server is the single source of truth
  const display = metricsDisplay(lastMetrics);
  panel.innerHTML = Object.entries(display)
    .map(([key, value]) => `<dt>${key}</dt><dd data-metric="${key}">${value}</dd>`)
    .join("");
}

function renderAll(): void {
  renderScatterPanel();
  renderDraft();
  renderMetrics();
  syncUrl();
}

async function evaluateDraft(): Promise<void> {
  if (!state.campaign || !state.sut || !state.mr) return;
  const seq = client.gate.begin("metrics");
  try {
    const metrics = await client.evaluateConstraint(state.campaign, state.sut, state.mr, state.draft);
    if (!client.gate.isCurrent("metrics", seq)) return;
    lastMetrics = metrics;
    el<HTMLSpanElement>("draft-error").textContent = "";
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      el<HTMLSpanElement>("draft-error").textContent = err.detail;
    } else {
      toast(String(err), () => void evaluateDraft());
    }
  }
  renderAll();
}

async function triggerRerun(): Promise<void> {
  if (!state.campaign || !state.sut || !state.mr || !lastMetrics) {
    el<HTMLSpanElement>("draft-error").textContent = "evaluate the draft before re-running";
    return;
  }
  const seed = Number(el<HTMLInputElement>("rerun-seed").value) || 11;
  try {
    const outcome = await runConstrainedRerun(client, state.campaign, {
      sut: state.sut,
      mr: state.mr,
      atoms: state.draft,
      seed,
    });
    if (outcome.warning) toast(outcome.warning);
    state = { ...state, campaign: outcome.childId };
    lastMetrics = null;
    await loadCampaigns();
    await loadPairs();
    await loadFeatures();
    await evaluateDraft(); // child opens with the draft pre-applied
  } catch (err) {
    toast(String(err), () => void triggerRerun());
  }
}

function bindControls(): void {
  el<HTMLSelectElement>("campaign-select").onchange = async (event) => {
    state = { ...state, campaign: (event.target as HTMLSelectElement).value, sut: null, mr: null };
    lastMetrics = null;
    await loadPairs();
    await loadFeatures();
    renderAll();
  };
  el<HTMLSelectElement>("pair-select").onchange = async (event) => {
    const [sut, mr] = (event.target as HTMLSelectElement).value.split(":");
    state = { ...state, sut: sut ?? null, mr: mr ?? null, draft: [] };
    lastMetrics = null;
    await loadFeatures();
    renderAll();
  };
  for (const axis of ["x-axis", "y-axis"] as const) {
    el<HTMLSelectElement>(axis).onchange = () => {
      state = {
        ...state,
        xAxis: el<HTMLSelectElement>("x-axis").value,
        yAxis: el<HTMLSelectElement>("y-axis").value,
      };
      renderAll();
    };
  }
  el<HTMLSelectElement>("verdict-filter").onchange = (event) => {
    state = { ...state, verdictFilter: (event.target as HTMLSelectElement).value as VerdictFilter };
    renderAll();
  };
  el<HTMLButtonElement>("add-atom").onclick = () => {
    if (!features) return;
    const feature = el<HTMLSelectElement>("atom-feature").value;
    const isFlag = features.flag_features.includes(feature);
    const op = isFlag ? "eq" : (el<HTMLSelectElement>("atom-op").value as Atom["op"]);
    const raw = el<HTMLInputElement>("atom-value").value;
    const atom: Atom = isFlag
      ? { feature, op: "eq", value: raw.trim() !== "false" }
      : { feature, op, value: Number(raw) };
    const next = addDraftAtom(state, atom, [
      ...features.numeric_features,
      ...features.flag_features,
    ]);
    if (typeof next === "string") {
      el<HTMLSpanElement>("draft-error").textContent = next;
      return;
    }
    state = next;
    lastMetrics = null;
    renderAll();
  };
  el<HTMLButtonElement>("evaluate-draft").onclick = () => void evaluateDraft();
  el<HTMLButtonElement>("trigger-rerun").onclick = () => void triggerRerun();
}

async function boot(): Promise<void> {
  bindControls();
  try {
    await loadCampaigns();
    await loadPairs();
    await loadFeatures();
    if (state.draft.length) await evaluateDraft();
    renderAll();
  } catch (err) {
    toast(String(err), () => void boot());
  }
}

void boot();
