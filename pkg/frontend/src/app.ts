/**
 * Controller: loads the schema, renders the form, and submits predictions.
 *
 * Submission rules: at most one request in flight (re-clicks while waiting
 * are ignored), the result panel always reflects the latest response, and
 * a failed request leaves the selection untouched and shows a banner.
 */

import {
  ApiError,
  fetchSchema,
  postPredict,
  type FetchLike,
  type PredictionResponse,
} from "./api.js";
import { SelectionState } from "./state.js";
import {
  buildLayout,
  clearBanner,
  renderGroups,
  renderResult,
  showBanner,
  updateSelectionView,
  type ViewRefs,
} from "./view.js";

export interface AppOptions {
  baseUrl?: string;
  fetchImpl?: FetchLike;
}

export class AppController {
  readonly refs: ViewRefs;
  state: SelectionState | null = null;
  lastResult: PredictionResponse | null = null;
  private inFlight = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {
    this.refs = buildLayout(root);
    this.refs.predictButton.addEventListener("click", () => {
      void this.submit();
    });
    this.refs.clearButton.addEventListener("click", () => {
      if (this.state) {
        this.state.clear();
        updateSelectionView(this.refs, this.state);
      }
    });
  }

  /** Fetch the schema and render the form; on failure offer a retry. */
  async loadSchema(): Promise<boolean> {
    clearBanner(this.refs);
    try {
      const schema = await fetchSchema(this.baseUrl, this.fetchImpl);
      this.state = new SelectionState(schema);
      renderGroups(this.refs.groups, schema, this.state, (id) => this.toggle(id));
      updateSelectionView(this.refs, this.state);
      return true;
    } catch (err) {
      showBanner(this.refs, describe(err, "could not load the feature catalog"), () => {
        void this.loadSchema();
      });
      return false;
    }
  }

  toggle(id: string): void {
    if (!this.state) return;
    this.state.toggle(id);
    updateSelectionView(this.refs, this.state);
  }

  /** Submit the current selection; no-op when empty or already waiting. */
  async submit(): Promise<void> {
    if (!this.state || this.state.count === 0 || this.inFlight) return;
    this.inFlight = true;
    this.refs.predictButton.classList.add("busy");
    const selection = this.state.selectedIds();
    try {
      const res = await postPredict(this.baseUrl, selection, this.fetchImpl);
      this.lastResult = res;
      clearBanner(this.refs);
      renderResult(this.refs, res);
    } catch (err) {
      showBanner(this.refs, describe(err, "prediction failed"));
    } finally {
      this.inFlight = false;
      this.refs.predictButton.classList.remove("busy");
      updateSelectionView(this.refs, this.state);
    }
  }
}

function describe(err: unknown, fallback: string): string {
  if (err instanceof ApiError) return `${fallback}: ${err.message}`;
  return `${fallback}: ${String(err)}`;
}

export async function initApp(
  root: HTMLElement,
  options: AppOptions = {},
): Promise<AppController> {
  const controller = new AppController(
    root,
    options.baseUrl ?? "",
    options.fetchImpl ?? ((input, init) => fetch(input, init)),
  );
  await controller.loadSchema();
  return controller;
}
