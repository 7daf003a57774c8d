// Meter state machine: debounced input, one logical in-flight request per
// settled text, and strict staleness handling via request tokens so the
// displayed verdict always corresponds to the most recently entered input.

import { ScoreResponse, ScoreResult, ValidationError } from "./api.js";

export const DEBOUNCE_MS = 150;

export interface MeterState {
  currentInput: string;
  // response/validation for the input they were requested for; null until
  // the first settled input resolves
  lastResponse: ScoreResponse | null;
  validation: ValidationError | null;
  responseFor: string | null;
  requestInFlight: boolean;
  errorBanner: string | null;
}

export type ScoreFn = (password: string, signal: AbortSignal) => Promise<ScoreResult>;

const HINT_TEXT: Record<string, string> = {
  length_lt_9: "reach 9 characters",
  class_count_lt_3: "add a 3rd character class",
};

export function hintsFor(response: ScoreResponse): string[] {
  return response.failed_rules.map((rule) => HINT_TEXT[rule] ?? rule);
}

export class MeterController {
  private state: MeterState = {
    currentInput: "",
    lastResponse: null,
    validation: null,
    responseFor: null,
    requestInFlight: false,
    errorBanner: null,
  };
  private timer: ReturnType<typeof setTimeout> | null = null;
  private token = 0;
  private controller: AbortController | null = null;

  constructor(
    private readonly score: ScoreFn,
    private readonly render: (state: MeterState) => void,
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {}

  getState(): MeterState {
    return { ...this.state };
  }

  /** Handle an edit: debounce, then score the settled text. */
  inputChanged(text: string): void {
    this.state.currentInput = text;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    if (text === "") {
      // nothing to score; supersede any in-flight request
      this.token += 1;
      this.controller?.abort();
      this.state = {
        ...this.state,
        lastResponse: null,
        validation: null,
        responseFor: null,
        requestInFlight: false,
        errorBanner: null,
      };
      this.render(this.getState());
      return;
    }
    this.render(this.getState());
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.issue(text);
    }, this.debounceMs);
  }

  private async issue(text: string): Promise<void> {
    const token = ++this.token;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    this.state.requestInFlight = true;
    this.render(this.getState());
    let result: ScoreResult;
    try {
      result = await this.score(text, controller.signal);
    } catch (err) {
      if (token !== this.token) {
        return; // superseded; aborts land here too
      }
      this.state.requestInFlight = false;
      this.state.errorBanner = "scoring service unreachable";
      this.render(this.getState());
      return;
    }
    if (token !== this.token) {
      return; // a newer input settled while this request ran
    }
    this.state.requestInFlight = false;
    this.state.errorBanner = null;
    this.state.responseFor = text;
    if (result.kind === "ok") {
      this.state.lastResponse = result.body;
      this.state.validation = null;
    } else {
      this.state.lastResponse = null;
      this.state.validation = result.body;
    }
    this.render(this.getState());
  }

  dispose(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.controller?.abort();
  }
}
