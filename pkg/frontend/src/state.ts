/**
 * Selection state for the occurrence form.
 *
 * The chosen set can only ever contain feature ids present in the schema
 * snapshot it was built from, so every id sent to /predict is one the
 * service itself advertised.
 */

import type { SchemaDoc } from "./api.js";

export class SelectionState {
  private readonly valid: Set<string>;
  private readonly chosen = new Set<string>();

  constructor(readonly schema: SchemaDoc) {
    this.valid = new Set(
      schema.classes.flatMap((cls) => cls.features.map((f) => f.id)),
    );
  }

  get featureCount(): number {
    return this.valid.size;
  }

  get groupCount(): number {
    return this.schema.classes.length;
  }

  get count(): number {
    return this.chosen.size;
  }

  has(id: string): boolean {
    return this.chosen.has(id);
  }

  /** Flip one feature; returns the new on/off value. */
  toggle(id: string): boolean {
    if (!this.valid.has(id)) {
      throw new Error(`unknown feature id: ${id}`);
    }
    if (this.chosen.has(id)) {
      this.chosen.delete(id);
      return false;
    }
    this.chosen.add(id);
    return true;
  }

  clear(): void {
    this.chosen.clear();
  }

  /** Stable (schema-ordered) list of the selected feature ids. */
  selectedIds(): string[] {
    const out: string[] = [];
    for (const cls of this.schema.classes) {
      for (const f of cls.features) {
        if (this.chosen.has(f.id)) out.push(f.id);
      }
    }
    return out;
  }
}
