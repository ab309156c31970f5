import { describe, expect, it } from "vitest";

import { SelectionState } from "../src/state.js";
import { canonicalSchema } from "./helpers.js";

describe("SelectionState", () => {
  it("knows the schema shape", () => {
    const state = new SelectionState(canonicalSchema());
    expect(state.groupCount).toBe(17);
    expect(state.featureCount).toBe(61);
    expect(state.count).toBe(0);
  });

  it("toggles features on and off", () => {
    const state = new SelectionState(canonicalSchema());
    expect(state.toggle("landing_phase")).toBe(true);
    expect(state.has("landing_phase")).toBe(true);
    expect(state.count).toBe(1);
    expect(state.toggle("landing_phase")).toBe(false);
    expect(state.has("landing_phase")).toBe(false);
    expect(state.count).toBe(0);
  });

  it("rejects ids the schema never advertised", () => {
    const state = new SelectionState(canonicalSchema());
    expect(() => state.toggle("made_up_feature")).toThrow(/unknown feature id/);
    expect(state.count).toBe(0);
  });

  it("returns selected ids in schema order", () => {
    const state = new SelectionState(canonicalSchema());
    state.toggle("weather");
    state.toggle("pushback_phase");
    state.toggle("injuries");
    expect(state.selectedIds()).toEqual(["pushback_phase", "weather", "injuries"]);
  });

  it("clear empties the selection", () => {
    const state = new SelectionState(canonicalSchema());
    state.toggle("weather");
    state.clear();
    expect(state.count).toBe(0);
    expect(state.selectedIds()).toEqual([]);
  });

  it("distinguishes the two fuel-system features", () => {
    const state = new SelectionState(canonicalSchema());
    state.toggle("fuel_system");
    state.toggle("fire_related_fuel_system");
    expect(state.count).toBe(2);
  });
});
