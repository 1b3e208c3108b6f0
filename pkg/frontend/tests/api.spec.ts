// Client contract tests against the live fixture server, with a recording
// fetch so every returned object can be compared to the raw wire payload.

import { describe, expect, inject, it } from "vitest";

import { ApiClient, ApiError, SequenceGate, type FetchLike } from "../src/api.js";

const BASE = inject("baseUrl");

interface Recorded {
  url: string;
  body: unknown;
}

function recordingFetch(log: Recorded[]): FetchLike {
  return async (input, init) => {
    const response = await fetch(input, init);
    const text = await response.text();
    log.push({ url: input, body: text ? JSON.parse(text) : null });
    return new Response(text, { status: response.status, headers: response.headers });
  };
}

function makeClient(log: Recorded[]): ApiClient {
  return new ApiClient(BASE, recordingFetch(log));
}

describe("api client passes wire payloads through untouched", () => {
  it("campaign list equals the raw response", async () => {
    const log: Recorded[] = [];
    const client = makeClient(log);
    const campaigns = await client.listCampaigns();
    expect(campaigns).toEqual((log[0]!.body as { campaigns: unknown }).campaigns);
    expect(campaigns.length).toBeGreaterThan(0);
    expect(campaigns[0]!.has.trials).toBe(true);
  });

  it("trials page equals the raw response", async () => {
    const log: Recorded[] = [];
    const client = makeClient(log);
    const page = await client.getTrials("fixture", { sut: "sum", mr: "permutative", limit: 7 });
    expect(page).toEqual(log[0]!.body);
    expect(page.trials.length).toBe(7);
    expect(page.total).toBe(48 * 2);
  });

  it("features payload equals the raw response", async () => {
    const log: Recorded[] = [];
    const client = makeClient(log);
    const features = await client.getFeatures("fixture", "sum_of_squares", "additive");
    expect(features).toEqual(log[0]!.body);
    expect(features.numeric_features).toContain("c");
    expect(features.rows.length).toBe(48 * 2);
  });

  it("constraint metrics equal the raw response", async () => {
    const log: Recorded[] = [];
    const client = makeClient(log);
    const metrics = await client.evaluateConstraint("fixture", "sum_of_squares", "additive", [
      { feature: "all_nonneg", op: "eq", value: true },
    ]);
    expect(metrics).toEqual(log[0]!.body);
  });
});

describe("api errors", () => {
  it("maps 404 to ApiError with the server detail", async () => {
    const client = new ApiClient(BASE);
    await expect(client.getCampaign("missing")).rejects.toMatchObject({ status: 404 });
  });

  it("maps 422 for malformed atoms", async () => {
    const client = new ApiClient(BASE);
    await expect(
      client.evaluateConstraint("fixture", "sum", "additive", [
        { feature: "x", op: "between" as never, value: 1 },
      ]),
    ).rejects.toMatchObject({ status: 422 });
  });

  it("signals unreachable servers as status 0 (retryable)", async () => {
    const client = new ApiClient("http://127.0.0.1:9");
    await expect(client.listCampaigns()).rejects.toMatchObject({ status: 0 });
    await expect(client.listCampaigns()).rejects.toBeInstanceOf(ApiError);
  });
});

describe("sequence gate", () => {
  it("marks earlier requests stale once a newer one begins", () => {
    const gate = new SequenceGate();
    const first = gate.begin("metrics");
    const second = gate.begin("metrics");
    expect(gate.isCurrent("metrics", first)).toBe(false);
    expect(gate.isCurrent("metrics", second)).toBe(true);
    const other = gate.begin("features");
    expect(gate.isCurrent("features", other)).toBe(true);
    expect(gate.isCurrent("metrics", second)).toBe(true);
  });
});
