/**
 * DOM construction for the single-page form: feature groups on the left,
 * a prediction panel and error banner on the right. No framework; the
 * controller in app.ts owns all behavior.
 */

import type { PredictionResponse, SchemaDoc } from "./api.js";
import type { SelectionState } from "./state.js";

export const LABEL_DISPLAY: Record<string, string> = {
  incident: "Incident",
  serious_incident: "Serious Incident",
};

export interface ViewRefs {
  banner: HTMLDivElement;
  groups: HTMLDivElement;
  selectedCount: HTMLSpanElement;
  predictButton: HTMLButtonElement;
  hint: HTMLParagraphElement;
  result: HTMLDivElement;
  clearButton: HTMLButtonElement;
}

export function buildLayout(root: HTMLElement): ViewRefs {
  root.innerHTML = `
    <header class="topbar">
      <h1>Occurrence classification aid</h1>
      <p class="subtitle">
        Select every fact that applies to the occurrence, then request a
        classification.
      </p>
    </header>
    <div class="banner" data-role="banner" hidden></div>
    <main class="layout">
      <section class="form-pane">
        <div class="form-toolbar">
          <span data-role="selected-count">0 features selected</span>
          <button type="button" data-role="clear">Clear selection</button>
        </div>
        <div class="groups" data-role="groups"></div>
      </section>
      <aside class="result-pane">
        <button type="button" class="predict" data-role="predict" disabled>
          Classify occurrence
        </button>
        <p class="hint" data-role="hint">Select at least one feature to classify.</p>
        <div class="result" data-role="result" hidden></div>
      </aside>
    </main>
  `;
  return {
    banner: must(root, "banner"),
    groups: must(root, "groups"),
    selectedCount: must(root, "selected-count"),
    predictButton: must(root, "predict"),
    hint: must(root, "hint"),
    result: must(root, "result"),
    clearButton: must(root, "clear"),
  };
}

function must<T extends HTMLElement>(root: HTMLElement, role: string): T {
  const el = root.querySelector(`[data-role="${role}"]`);
  if (!el) throw new Error(`layout is missing element ${role}`);
  return el as T;
}

export function renderGroups(
  container: HTMLElement,
  schema: SchemaDoc,
  state: SelectionState,
  onToggle: (id: string) => void,
): void {
  container.textContent = "";
  for (const cls of schema.classes) {
    const fieldset = document.createElement("fieldset");
    fieldset.className = "group";
    fieldset.dataset.classId = cls.id;

    const legend = document.createElement("legend");
    legend.textContent = cls.display_name;
    fieldset.appendChild(legend);

    for (const feature of cls.features) {
      const label = document.createElement("label");
      label.className = "feature";

      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.featureId = feature.id;
      box.checked = state.has(feature.id);
      box.addEventListener("change", () => onToggle(feature.id));

      const text = document.createElement("span");
      text.textContent = feature.display_name;

      label.appendChild(box);
      label.appendChild(text);
      fieldset.appendChild(label);
    }
    container.appendChild(fieldset);
  }
}

export function updateSelectionView(refs: ViewRefs, state: SelectionState): void {
  const n = state.count;
  refs.selectedCount.textContent =
    n === 1 ? "1 feature selected" : `${n} features selected`;
  refs.predictButton.disabled = n === 0;
  refs.hint.hidden = n !== 0;
  for (const box of refs.groups.querySelectorAll<HTMLInputElement>(
    "input[data-feature-id]",
  )) {
    box.checked = state.has(box.dataset.featureId ?? "");
  }
}

export function renderResult(refs: ViewRefs, res: PredictionResponse): void {
  const pct = Math.round(res.score * 1000) / 10;
  refs.result.hidden = false;
  refs.result.innerHTML = `
    <p class="result-label ${res.label}" data-role="result-label">
      ${LABEL_DISPLAY[res.label] ?? res.label}
    </p>
    <div class="score-row">
      <div class="score-bar"><div class="score-fill" style="width: ${pct}%"></div></div>
      <span data-role="result-score">${pct}%</span>
    </div>
    <p class="score-note">model score, not a probability</p>
    <p class="model-meta" data-role="result-model">
      ${res.model_family.toUpperCase()} · ${res.model_version}
    </p>
  `;
}

export function showBanner(
  refs: ViewRefs,
  message: string,
  retry?: () => void,
): void {
  refs.banner.hidden = false;
  refs.banner.textContent = "";
  const text = document.createElement("span");
  text.textContent = message;
  refs.banner.appendChild(text);
  if (retry) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.dataset.role = "retry";
    btn.textContent = "Retry";
    btn.addEventListener("click", retry);
    refs.banner.appendChild(btn);
  }
}

export function clearBanner(refs: ViewRefs): void {
  refs.banner.hidden = true;
  refs.banner.textContent = "";
}
