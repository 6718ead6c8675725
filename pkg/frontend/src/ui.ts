// DOM rendering. The whole view re-renders on every store update; values are
// printed exactly as the API reported them (display precision only).

import { CatalogInfo, Decision, StepRecord } from "./api.js";
import { TrainerStore, TrainerState } from "./state.js";

export function formatNumber(value: number | null | undefined, digits = 3): string {
  if (value === null || value === undefined) return "-";
  return value.toFixed(digits);
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function mountApp(root: HTMLElement, store: TrainerStore): void {
  store.subscribe((state) => render(root, store, state));
}

function render(root: HTMLElement, store: TrainerStore, state: TrainerState): void {
  root.replaceChildren();
  root.append(el("h1", {}, ["theraloop trainer"]));
  if (state.error) {
    root.append(el("div", { class: "error", id: "error-box" }, [state.error]));
  }
  if (state.phase === "setup") {
    root.append(renderSetupForm(store, state));
  } else {
    root.append(renderSession(store, state));
  }
}

// ---------------------------------------------------------------------------
// Setup
// ---------------------------------------------------------------------------

function renderSetupForm(store: TrainerStore, state: TrainerState): HTMLElement {
  const panel = el("div", { class: "panel", id: "setup-form" });
  const catalog = state.catalog;
  if (!catalog) {
    panel.append(el("p", {}, ["Loading catalog..."]));
    return panel;
  }

  const categorySelect = (id: string, options: string[], picked?: string) => {
    const select = el("select", { id });
    for (const option of options) {
      const opt = el("option", { value: option }, [option]);
      if (option === picked) opt.selected = true;
      select.append(opt);
    }
    return select;
  };

  const age = categorySelect("age-band", catalog.profile_categories.age_band, "school_age");
  const language = categorySelect(
    "language-ability",
    catalog.profile_categories.language_ability,
    "phrases",
  );
  const severity = categorySelect(
    "severity",
    catalog.profile_categories.severity,
    "moderate",
  );
  const seed = el("input", { id: "seed", type: "number", value: "1" }) as HTMLInputElement;
  const maxSteps = el("input", {
    id: "max-steps",
    type: "number",
    value: "10",
    min: "1",
  }) as HTMLInputElement;

  const activityBoxes: HTMLInputElement[] = [];
  const activityList = el("div", { class: "activity-list", id: "activity-list" });
  for (const activity of catalog.activities) {
    const box = el("input", {
      type: "checkbox",
      id: `activity-${activity.id}`,
      value: activity.id,
    }) as HTMLInputElement;
    activityBoxes.push(box);
    activityList.append(
      el("label", { class: "activity-option" }, [box, ` ${activity.name}`]),
    );
  }

  const submit = el("button", { id: "create-session", disabled: "" }, [
    "Start session",
  ]) as HTMLButtonElement;

  const syncSubmit = () => {
    // no scenario selected -> no session
    submit.disabled = !activityBoxes.some((b) => b.checked) || state.busy;
  };
  for (const box of activityBoxes) box.addEventListener("change", syncSubmit);
  syncSubmit();

  submit.addEventListener("click", () => {
    const scenario = activityBoxes
      .filter((b) => b.checked)
      .map((b) => ({ activity: b.value, max_steps: Number(maxSteps.value) }));
    void store.createSession({
      seed: Number(seed.value),
      profile: {
        age_band: age.value,
        language_ability: language.value,
        severity: severity.value,
      },
      scenario,
      gate: "interactive",
    });
  });

  panel.append(
    el("h2", {}, ["New session"]),
    field("Age band", age),
    field("Language ability", language),
    field("Severity", severity),
    field("Seed", seed),
    field("Steps per activity", maxSteps),
    el("h3", {}, ["Activities"]),
    activityList,
    submit,
  );
  return panel;
}

function field(label: string, control: HTMLElement): HTMLElement {
  return el("div", { class: "field" }, [el("label", {}, [label]), control]);
}

// ---------------------------------------------------------------------------
// Live session
// ---------------------------------------------------------------------------

function renderSession(store: TrainerStore, state: TrainerState): HTMLElement {
  const wrap = el("div", { id: "session-view" });
  const snapshot = state.snapshot;
  if (!snapshot) {
    wrap.append(el("p", {}, ["Loading session..."]));
    return wrap;
  }

  wrap.append(renderStatusBar(state));
  if (state.staleDecision) {
    const prompt = el("div", { class: "warning", id: "stale-prompt" }, [
      "That proposal was already decided. ",
    ]);
    const refresh = el("button", { id: "refresh" }, ["Refresh"]);
    refresh.addEventListener("click", () => void store.refresh());
    prompt.append(refresh);
    wrap.append(prompt);
  }
  wrap.append(renderGatePanel(store, state));
  wrap.append(renderBehaviorPanel(state));
  wrap.append(renderTimeline(state));

  const reset = el("button", { id: "new-session" }, ["New session"]);
  reset.addEventListener("click", () => store.reset());
  wrap.append(reset);
  return wrap;
}

function renderStatusBar(state: TrainerState): HTMLElement {
  const snapshot = state.snapshot!;
  const bar = el("div", { class: "status-bar", id: "status-bar" });

  const dyads = el("div", { class: "dyad-indicator", id: "dyad-indicator" });
  for (const dyad of ["DEMONSTRATE", "OBSERVE", "HELP"]) {
    dyads.append(
      el(
        "span",
        {
          class: `dyad-pill${dyad === snapshot.dyad ? " active" : ""}`,
          "data-dyad": dyad,
        },
        [dyad],
      ),
    );
  }

  // gauge value: the last committed step's autonomy, exactly as served
  const autonomyValue = snapshot.last_step ? snapshot.last_step.autonomy : null;
  const gauge = el("div", { class: "gauge", id: "autonomy-gauge" });
  const fill = el("div", {
    class: "gauge-fill",
    style: `width: ${autonomyValue === null ? 0 : autonomyValue * 100}%`,
  });
  gauge.append(
    fill,
    el("span", { class: "gauge-value", id: "autonomy-value" }, [
      formatNumber(autonomyValue),
    ]),
  );

  bar.append(
    dyads,
    el("div", { class: "stat" }, [
      "need ",
      el("strong", { id: "need-value" }, [formatNumber(snapshot.need)]),
    ]),
    el("div", { class: "stat" }, ["autonomy ", gauge]),
    el("div", { class: "stat", id: "progress" }, [
      `step ${snapshot.step_index} | task ${snapshot.task_index}` +
        (snapshot.finished ? " | finished" : ""),
    ]),
  );
  return bar;
}

function renderGatePanel(store: TrainerStore, state: TrainerState): HTMLElement {
  const snapshot = state.snapshot!;
  const panel = el("div", { class: "panel", id: "gate-panel" });
  panel.append(el("h2", {}, ["Caregiver gate"]));

  if (snapshot.finished) {
    panel.append(el("p", { id: "finished-note" }, ["Session finished."]));
    return panel;
  }

  const pending = snapshot.pending;
  if (!pending) {
    const stepButton = el("button", { id: "request-step" }, [
      "Propose next step",
    ]) as HTMLButtonElement;
    stepButton.disabled = state.busy;
    stepButton.addEventListener("click", () => void store.requestStep());
    panel.append(stepButton);
    return panel;
  }

  const action = pending.proposed_action;
  panel.append(
    el("p", { id: "proposal" }, [
      `Proposed: level ${action.level} (${action.kind})` +
        (action.utterance ? ` - "${action.utterance}"` : ""),
    ]),
    el("p", {}, [
      "need ",
      el("strong", { id: "pending-need" }, [formatNumber(pending.need_after)]),
      ` after signals [${pending.response.signals.join(", ")}]`,
    ]),
  );

  const approve = el("button", { id: "approve" }, ["Approve"]);
  approve.addEventListener("click", () => void store.decide({ decision: "approve" }));

  const levelSelect = el("select", { id: "override-level" }) as HTMLSelectElement;
  for (const candidate of pending.ladder) {
    if (candidate.level === action.level) continue;
    levelSelect.append(
      el("option", { value: String(candidate.level) }, [
        `level ${candidate.level} (${candidate.kind})`,
      ]),
    );
  }
  const override = el("button", { id: "override" }, ["Override"]);
  override.addEventListener("click", () => {
    const decision: Decision = {
      decision: "override",
      level: Number(levelSelect.value),
    };
    void store.decide(decision);
  });

  const halt = el("button", { id: "halt" }, ["Halt task"]);
  halt.addEventListener("click", () => void store.decide({ decision: "halt" }));

  panel.append(approve, levelSelect, override, halt);
  return panel;
}

function renderBehaviorPanel(state: TrainerState): HTMLElement {
  const snapshot = state.snapshot!;
  const panel = el("div", { class: "panel", id: "behavior-panel" });
  panel.append(el("h2", {}, ["Child's last response"]));
  const response = snapshot.pending?.response ?? snapshot.last_step?.response;
  if (!response) {
    panel.append(el("p", {}, ["No response yet."]));
    return panel;
  }
  const list = el("ul", { id: "behavior-list" });
  for (const behaviorId of response.behaviors) {
    list.append(el("li", {}, [describeBehavior(state.catalog, behaviorId)]));
  }
  panel.append(
    list,
    el("p", {}, [
      "engagement ",
      el("strong", { id: "engagement-value" }, [formatNumber(response.engagement)]),
    ]),
  );
  return panel;
}

function describeBehavior(catalog: CatalogInfo | null, behaviorId: string): string {
  const record = catalog?.behaviors.find((b) => b.id === behaviorId);
  return record ? `${record.description} (${record.id})` : behaviorId;
}

function renderTimeline(state: TrainerState): HTMLElement {
  const panel = el("div", { class: "panel", id: "timeline-panel" });
  panel.append(el("h2", {}, ["Timeline"]));
  const list = el("ol", { class: "timeline", id: "timeline" });
  for (const step of state.timeline) {
    list.append(renderTimelineEntry(step));
  }
  panel.append(list);
  return panel;
}

function renderTimelineEntry(step: StepRecord): HTMLElement {
  const decision = step.gate.decision;
  return el(
    "li",
    { class: `timeline-entry decision-${decision}`, "data-step": String(step.step_index) },
    [
      `#${step.step_index} ${step.stimulus.activity}: ` +
        `need ${formatNumber(step.need_after)} -> level ${step.executed_action.level} ` +
        `[${decision}] autonomy ${formatNumber(step.autonomy)} ` +
        `(${step.dyad_before} -> ${step.dyad_after})`,
    ],
  );
}
