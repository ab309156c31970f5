import { beforeEach, describe, expect, it } from "vitest";

import { initApp } from "../src/app.js";
import type { PredictionResponse } from "../src/api.js";
import {
  WORKED_EXAMPLE_SELECTION,
  canonicalSchema,
  fakeFetch,
  jsonResponse,
} from "./helpers.js";

const PREDICTION: PredictionResponse = {
  label: "serious_incident",
  score: 0.82,
  model_family: "rfc",
  model_version: "deadbeef0123",
};

function appRoot(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("schema rendering", () => {
  it("renders one group per data class and one control per feature", async () => {
    const { impl } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    expect(app.refs.groups.querySelectorAll("fieldset.group")).toHaveLength(17);
    expect(
      app.refs.groups.querySelectorAll("input[data-feature-id]"),
    ).toHaveLength(61);
    const legends = [...app.refs.groups.querySelectorAll("legend")].map(
      (el) => el.textContent,
    );
    expect(legends[0]).toBe("Phase of flight");
    expect(legends).toHaveLength(17);
  });

  it("disables predict with a hint while nothing is selected", async () => {
    const { impl } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    expect(app.refs.predictButton.disabled).toBe(true);
    expect(app.refs.hint.hidden).toBe(false);
    app.toggle("weather");
    expect(app.refs.predictButton.disabled).toBe(false);
    expect(app.refs.hint.hidden).toBe(true);
    expect(app.refs.selectedCount.textContent).toBe("1 feature selected");
  });

  it("toggling a feature twice returns it to unselected", async () => {
    const { impl } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    const box = app.refs.groups.querySelector<HTMLInputElement>(
      'input[data-feature-id="excursion"]',
    )!;
    box.click();
    expect(app.state?.has("excursion")).toBe(true);
    expect(box.checked).toBe(true);
    box.click();
    expect(app.state?.has("excursion")).toBe(false);
    expect(box.checked).toBe(false);
  });

  it("offers retry with a banner when the schema fetch fails", async () => {
    let healthy = false;
    const { impl } = fakeFetch({
      "/api/v1/schema": () =>
        healthy
          ? jsonResponse(canonicalSchema())
          : jsonResponse({ code: "down", message: "starting up" }, 503),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    expect(app.refs.banner.hidden).toBe(false);
    expect(app.refs.banner.textContent).toContain("starting up");
    const retry = app.refs.banner.querySelector<HTMLButtonElement>(
      '[data-role="retry"]',
    );
    expect(retry).not.toBeNull();

    healthy = true;
    retry!.click();
    await new Promise((r) => setTimeout(r, 0));
    expect(app.refs.banner.hidden).toBe(true);
    expect(app.refs.groups.querySelectorAll("fieldset.group")).toHaveLength(17);
  });
});

describe("prediction flow", () => {
  it("submits the worked-example selection and shows label, score, model", async () => {
    const { impl, calls } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
      "/api/v1/predict": () => jsonResponse(PREDICTION),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    for (const id of WORKED_EXAMPLE_SELECTION) app.toggle(id);
    await app.submit();

    const panel = app.refs.result;
    expect(panel.hidden).toBe(false);
    expect(panel.querySelector('[data-role="result-label"]')?.textContent).toContain(
      "Serious Incident",
    );
    expect(panel.querySelector('[data-role="result-score"]')?.textContent).toContain(
      "82%",
    );
    expect(panel.querySelector('[data-role="result-model"]')?.textContent).toContain(
      "RFC",
    );
    const body = JSON.parse(String(calls.at(-1)?.init?.body));
    expect(body.selected_features).toEqual(
      expect.arrayContaining(WORKED_EXAMPLE_SELECTION),
    );
    expect(body.selected_features).toHaveLength(WORKED_EXAMPLE_SELECTION.length);
    // selection stays editable for what-if iteration
    expect(app.state?.count).toBe(WORKED_EXAMPLE_SELECTION.length);
  });

  it("keeps the selection and shows a banner when the service errors", async () => {
    const { impl } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
      "/api/v1/predict": () =>
        jsonResponse({ code: "boom", message: "model exploded" }, 500),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    app.toggle("engine_fire");
    app.toggle("injuries");
    await app.submit();

    expect(app.refs.banner.hidden).toBe(false);
    expect(app.refs.banner.textContent).toContain("model exploded");
    expect(app.state?.selectedIds()).toEqual(["engine_fire", "injuries"]);
    expect(app.refs.result.hidden).toBe(true);
  });

  it("honors exactly one in-flight request on rapid double submit", async () => {
    let release!: (r: Response) => void;
    const gate = new Promise<Response>((resolve) => {
      release = resolve;
    });
    const { impl, calls } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
      "/api/v1/predict": () => gate,
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    app.toggle("weather");

    const first = app.submit();
    const second = app.submit(); // ignored: one already in flight
    release(jsonResponse(PREDICTION));
    await Promise.all([first, second]);

    const predictCalls = calls.filter((c) => c.url.includes("/predict"));
    expect(predictCalls).toHaveLength(1);
    expect(app.refs.result.hidden).toBe(false);
  });

  it("replaces the result when the selection changes (no stale display)", async () => {
    let score = 0.9;
    const { impl } = fakeFetch({
      "/api/v1/schema": () => jsonResponse(canonicalSchema()),
      "/api/v1/predict": () =>
        jsonResponse({ ...PREDICTION, label: "incident", score }),
    });
    const app = await initApp(appRoot(), { fetchImpl: impl });
    app.toggle("weather");
    await app.submit();
    expect(
      app.refs.result.querySelector('[data-role="result-score"]')?.textContent,
    ).toContain("90%");

    score = 0.2;
    app.toggle("turbulence_by_weather");
    await app.submit();
    expect(
      app.refs.result.querySelector('[data-role="result-score"]')?.textContent,
    ).toContain("20%");
  });
});
