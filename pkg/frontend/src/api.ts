// Typed client for the session service. The UI talks to the server only
// through these calls and renders the values it gets back verbatim; no
// policy math happens client-side.

export interface ActionRecord {
  id: string;
  level: number;
  kind: string;
  utterance: string | null;
}

export interface StimulusRecord {
  activity: string;
  step_index: number;
  intensity: number | null;
}

export interface ResponseRecord {
  behaviors: string[];
  engagement: number;
  signals: string[];
}

export interface StepRecord {
  step_index: number;
  task_index: number;
  stimulus: StimulusRecord;
  response: ResponseRecord;
  need_before: number;
  need_after: number;
  chosen_action: ActionRecord;
  gate: { decision: string; action?: ActionRecord };
  executed_action: ActionRecord;
  cues: { channel: string; kind: string; actor: string }[];
  dyad_before: string;
  dyad_after: string;
  autonomy: number;
}

export interface PendingProposal {
  step_index: number;
  task_index: number;
  stimulus: StimulusRecord;
  response: ResponseRecord;
  need_before: number;
  need_after: number;
  proposed_action: ActionRecord;
  ladder: ActionRecord[];
  dyad: string;
}

export interface Snapshot {
  dyad: string;
  need: number;
  step_index: number;
  task_index: number;
  finished: boolean;
  pending: PendingProposal | null;
  last_step: StepRecord | null;
  summary_so_far: { steps: number; mean_autonomy: number | null };
}

export interface CatalogInfo {
  activities: { id: string; name: string; features: string[] }[];
  features: { id: string; name: string; max_value: number; motor: boolean }[];
  behaviors: { id: string; feature: string; value: number; description: string }[];
  profile_categories: {
    age_band: string[];
    language_ability: string[];
    severity: string[];
  };
}

export interface SessionConfigBody {
  seed: number;
  profile: { age_band: string; language_ability: string; severity: string };
  scenario: { activity: string; max_steps: number }[];
  gate: "interactive" | "auto_approve";
}

export type StepResult =
  | { status: "pending"; proposal: PendingProposal }
  | { status: "committed"; step: StepRecord };

export type Decision =
  | { decision: "approve" }
  | { decision: "override"; level: number }
  | { decision: "halt" };

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly code: string,
  ) {
    super(message);
  }
}

let baseUrl = "";

export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(baseUrl + path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!res.ok) {
    let code = "http_error";
    let message = `${res.status} ${res.statusText}`;
    try {
      const body = await res.json();
      if (body.error) {
        code = body.error.code ?? code;
        message = body.error.message ?? message;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(message, res.status, code);
  }
  return res.json() as Promise<T>;
}

export const api = {
  catalog(): Promise<CatalogInfo> {
    return request("/api/catalog");
  },

  createSession(config: SessionConfigBody): Promise<{ id: string; snapshot: Snapshot }> {
    return request("/api/sessions", { method: "POST", body: JSON.stringify(config) });
  },

  snapshot(id: string): Promise<{ id: string; snapshot: Snapshot }> {
    return request(`/api/sessions/${id}`);
  },

  step(id: string): Promise<StepResult> {
    return request(`/api/sessions/${id}/step`, { method: "POST" });
  },

  decide(id: string, decision: Decision): Promise<{ status: string; step: StepRecord }> {
    return request(`/api/sessions/${id}/decide`, {
      method: "POST",
      body: JSON.stringify(decision),
    });
  },

  trace(id: string): Promise<string> {
    return fetch(`${baseUrl}/api/sessions/${id}/trace`).then((res) => {
      if (!res.ok) throw new ApiError(`trace fetch failed`, res.status, "http_error");
      return res.text();
    });
  },
};
