// DOM wiring: mounts the meter into a root element and renders MeterState.
// The feature breakdown is rendered verbatim from the service response; this
// file adds no scoring heuristics of its own. The password is never written
// to storage or the URL.

import { ScoreResponse } from "./api.js";
import { hintsFor, MeterController, MeterState, ScoreFn } from "./meter.js";

const FEATURE_ORDER = [
  "length",
  "num_digits",
  "num_lowercase",
  "num_uppercase",
  "num_special_chars",
  "char_repeat",
  "max_consecutive_chars",
  "char_type_changes",
];

export function mountMeter(root: HTMLElement, score: ScoreFn, debounceMs?: number): MeterController {
  root.innerHTML = `
    <div class="meter">
      <label for="pw-input">Try a password</label>
      <input id="pw-input" type="text" autocomplete="off" autocapitalize="off"
             spellcheck="false" placeholder="type here" />
      <div id="error-banner" class="banner" hidden></div>
      <div id="verdict-panel" class="panel" hidden>
        <div id="verdict" class="verdict"></div>
        <div id="probability-wrap" hidden>
          <div class="bar-track"><div id="probability-bar" class="bar"></div></div>
          <span id="probability-text"></span>
        </div>
        <ul id="hints" class="hints"></ul>
        <table id="features" class="features"></table>
      </div>
      <div id="validation" class="validation" hidden></div>
      <div id="pending" class="pending" hidden>scoring&hellip;</div>
    </div>`;

  const input = root.querySelector<HTMLInputElement>("#pw-input")!;
  const banner = root.querySelector<HTMLElement>("#error-banner")!;
  const panel = root.querySelector<HTMLElement>("#verdict-panel")!;
  const verdict = root.querySelector<HTMLElement>("#verdict")!;
  const probWrap = root.querySelector<HTMLElement>("#probability-wrap")!;
  const probBar = root.querySelector<HTMLElement>("#probability-bar")!;
  const probText = root.querySelector<HTMLElement>("#probability-text")!;
  const hints = root.querySelector<HTMLElement>("#hints")!;
  const features = root.querySelector<HTMLElement>("#features")!;
  const validation = root.querySelector<HTMLElement>("#validation")!;
  const pending = root.querySelector<HTMLElement>("#pending")!;

  function renderResponse(response: ScoreResponse): void {
    verdict.textContent = response.label;
    verdict.className = `verdict ${response.label}`;
    if (response.probability !== undefined) {
      probWrap.hidden = false;
      const pct = Math.round(response.probability * 100);
      probBar.style.width = `${pct}%`;
      probText.textContent = `${pct}% strong`;
    } else {
      probWrap.hidden = true;
    }
    hints.innerHTML = "";
    for (const hint of hintsFor(response)) {
      const li = document.createElement("li");
      li.className = "chip";
      li.textContent = hint;
      hints.appendChild(li);
    }
    features.innerHTML = "";
    for (const name of FEATURE_ORDER) {
      const row = document.createElement("tr");
      const label = document.createElement("td");
      label.textContent = name;
      const value = document.createElement("td");
      value.textContent = String(response.features[name]);
      row.append(label, value);
      features.appendChild(row);
    }
  }

  function render(state: MeterState): void {
    banner.hidden = state.errorBanner === null;
    banner.textContent = state.errorBanner ?? "";
    const settled = state.responseFor === state.currentInput && state.currentInput !== "";
    pending.hidden = !(state.currentInput !== "" && !settled);
    if (settled && state.lastResponse) {
      panel.hidden = false;
      validation.hidden = true;
      renderResponse(state.lastResponse);
    } else if (settled && state.validation) {
      panel.hidden = true;
      validation.hidden = false;
      validation.textContent = `${state.validation.error} (rule: ${state.validation.rule})`;
    } else {
      panel.hidden = true;
      validation.hidden = true;
    }
  }

  const controller = new MeterController(score, render, debounceMs);
  input.addEventListener("input", () => controller.inputChanged(input.value));
  return controller;
}
