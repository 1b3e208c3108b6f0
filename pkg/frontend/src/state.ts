// View state and its URL round-trip. The whole view is reproducible from a
// deep link: campaign, (sut, mr) pair, axes, verdict filter, draft atoms.

import type { Atom, AtomOp, VerdictFilter } from "./types.js";

export const MAX_DRAFT_ATOMS = 2;

export interface ViewState {
  campaign: string | null;
  sut: string | null;
  mr: string | null;
  xAxis: string;
  yAxis: string;
  verdictFilter: VerdictFilter;
  draft: Atom[];
}

export const DEFAULT_STATE: ViewState = {
  campaign: null,
  sut: null,
  mr: null,
  xAxis: "min_elem",
  yAxis: "mean_elem",
  verdictFilter: "ALL",
  draft: [],
};

const FILTERS: VerdictFilter[] = ["ALL", "HOLDS", "VIOLATED", "ERROR"];
const OPS: AtomOp[] = ["ge", "le", "eq"];

function encodeAtom(atom: Atom): string {
  return [atom.feature, atom.op, String(atom.value)].join("~");
}

function decodeAtom(text: string): Atom | null {
  const parts = text.split("~");
  if (parts.length !== 3) return null;
  const [feature, op, raw] = parts as [string, string, string];
  if (!feature || !OPS.includes(op as AtomOp)) return null;
  if (op === "eq") {
    if (raw !== "true" && raw !== "false") return null;
    return { feature, op, value: raw === "true" };
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) return null;
  return { feature, op: op as AtomOp, value };
}

export function encodeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.campaign) params.set("campaign", state.campaign);
  if (state.sut) params.set("sut", state.sut);
  if (state.mr) params.set("mr", state.mr);
  params.set("x", state.xAxis);
  params.set("y", state.yAxis);
  if (state.verdictFilter !== "ALL") params.set("verdict", state.verdictFilter);
  if (state.draft.length) params.set("draft", state.draft.map(encodeAtom).join(";"));
  return params.toString();
}

export function decodeViewState(query: string): ViewState {
  const params = new URLSearchParams(query);
  const verdict = params.get("verdict");
  const draft: Atom[] = [];
  const draftRaw = params.get("draft");
  if (draftRaw) {
    for (const chunk of draftRaw.split(";")) {
      const atom = decodeAtom(chunk);
      if (atom && draft.length < MAX_DRAFT_ATOMS) draft.push(atom);
    }
  }
  return {
    campaign: params.get("campaign"),
    sut: params.get("sut"),
    mr: params.get("mr"),
    xAxis: params.get("x") ?? DEFAULT_STATE.xAxis,
    yAxis: params.get("y") ?? DEFAULT_STATE.yAxis,
    verdictFilter: FILTERS.includes(verdict as VerdictFilter)
      ? (verdict as VerdictFilter)
      : "ALL",
    draft,
  };
}

/** Add an atom to the draft; returns an error string instead when the
 * two-atom cap (matching the miner's search depth) would be exceeded or the
 * feature is not plottable in this campaign. */
export function addDraftAtom(
  state: ViewState,
  atom: Atom,
  knownFeatures: readonly string[],
): ViewState | string {
  if (state.draft.length >= MAX_DRAFT_ATOMS) {
    return `drafts are limited to ${MAX_DRAFT_ATOMS} atoms, mirroring the miner's search depth`;
  }
  if (!knownFeatures.includes(atom.feature)) {
    return `unknown feature ${atom.feature}`;
  }
  return { ...state, draft: [...state.draft, atom] };
}

export function clearDraft(state: ViewState): ViewState {
  return { ...state, draft: [] };
}

export function selectPair(state: ViewState, sut: string, mr: string): ViewState {
  return { ...state, sut, mr, draft: [] };
}

export function setAxes(
  state: ViewState,
  xAxis: string,
  yAxis: string,
  available: readonly string[],
): ViewState {
  return {
    ...state,
    xAxis: available.includes(xAxis) ? xAxis : state.xAxis,
    yAxis: available.includes(yAxis) ? yAxis : state.yAxis,
  };
}
