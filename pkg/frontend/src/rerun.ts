// Constrained re-run flow: trigger the child campaign, then poll until its
// trial log exists. Polling (1s default) keeps the contract stateless; the
// sleeper is injectable so tests run instantly.

import type { ApiClient } from "./api.js";
import type { Atom, RerunResponse } from "./types.js";

export interface RerunOutcome {
  childId: string;
  partial: boolean;
  warning: string | null;
  response: RerunResponse;
}

export type Sleeper = (ms: number) => Promise<void>;

const defaultSleep: Sleeper = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export async function runConstrainedRerun(
  client: ApiClient,
  campaignId: string,
  body: { sut: string; mr: string; atoms: Atom[]; seed: number; n?: number; cap?: number },
  opts: { pollMs?: number; timeoutMs?: number; sleep?: Sleeper } = {},
): Promise<RerunOutcome> {
  const pollMs = opts.pollMs ?? 1000;
  const timeoutMs = opts.timeoutMs ?? 60000;
  const sleep = opts.sleep ?? defaultSleep;

  const response = await client.rerun(campaignId, body);
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const child = await client.getCampaign(response.child_id);
    if (child.has.trials) break;
    if (Date.now() > deadline) {
      throw new Error(`child campaign ${response.child_id} has no trial log after ${timeoutMs}ms`);
    }
    await sleep(pollMs);
  }
  return {
    childId: response.child_id,
    partial: response.partial,
    warning: response.partial
      ? `only ${response.generated}/${response.requested} data satisfied the constraint ` +
        `within ${response.draws} draws`
      : null,
    response,
  };
}
