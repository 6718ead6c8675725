// Session view state: a thin store over the API. Every number in the view
// comes from a server response; the store only accumulates the timeline and
// polls a fresh snapshot after each action.

import {
  api,
  ApiError,
  CatalogInfo,
  Decision,
  SessionConfigBody,
  Snapshot,
  StepRecord,
} from "./api.js";

export interface TrainerState {
  phase: "setup" | "running";
  catalog: CatalogInfo | null;
  sessionId: string | null;
  snapshot: Snapshot | null;
  timeline: StepRecord[];
  error: string | null;
  staleDecision: boolean;
  busy: boolean;
}

type Listener = (state: TrainerState) => void;

export class TrainerStore {
  private state: TrainerState = {
    phase: "setup",
    catalog: null,
    sessionId: null,
    snapshot: null,
    timeline: [],
    error: null,
    staleDecision: false,
    busy: false,
  };
  private listeners: Listener[] = [];

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  getState(): TrainerState {
    return this.state;
  }

  private update(patch: Partial<TrainerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async loadCatalog(): Promise<void> {
    try {
      this.update({ catalog: await api.catalog(), error: null });
    } catch (err) {
      this.update({ error: describe(err) });
    }
  }

  async createSession(config: SessionConfigBody): Promise<void> {
    this.update({ busy: true, error: null });
    try {
      const { id, snapshot } = await api.createSession(config);
      this.update({
        phase: "running",
        sessionId: id,
        snapshot,
        timeline: [],
        busy: false,
      });
    } catch (err) {
      // surfaced inline next to the form, message verbatim from the API
      this.update({ busy: false, error: describe(err) });
    }
  }

  /** Ask the policy for the next proposal (or, with an auto gate, run one
   * full step). */
  async requestStep(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    this.update({ busy: true, error: null, staleDecision: false });
    try {
      const result = await api.step(id);
      if (result.status === "committed") {
        this.update({ timeline: [...this.state.timeline, result.step] });
      }
      await this.refresh();
    } catch (err) {
      this.update({ error: describe(err) });
    } finally {
      this.update({ busy: false });
    }
  }

  async decide(decision: Decision): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    this.update({ busy: true, error: null });
    try {
      const { step } = await api.decide(id, decision);
      this.update({ timeline: [...this.state.timeline, step] });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone else committed this proposal; prompt a refresh
        this.update({ staleDecision: true, error: describe(err) });
      } else {
        this.update({ error: describe(err) });
      }
    } finally {
      await this.refresh();
      this.update({ busy: false });
    }
  }

  async refresh(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      const { snapshot } = await api.snapshot(id);
      this.update({ snapshot });
    } catch (err) {
      this.update({ error: describe(err) });
    }
  }

  reset(): void {
    this.update({
      phase: "setup",
      sessionId: null,
      snapshot: null,
      timeline: [],
      error: null,
      staleDecision: false,
      busy: false,
    });
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  return err instanceof Error ? err.message : String(err);
}
