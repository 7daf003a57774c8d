// @vitest-environment jsdom
//
// Automated browser-level tests: a jsdom document, real DOM events, and a
// scoring function backed by verbatim service fixtures.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ScoreFn } from "../src/meter.js";
import { mountMeter } from "../src/ui.js";
import { resultFor } from "./fixtures.js";

interface Harness {
  input: HTMLInputElement;
  calls: string[];
  type(text: string): void;
  settle(): Promise<void>;
  el(selector: string): HTMLElement;
}

function makeHarness(score?: ScoreFn): Harness {
  const root = document.getElementById("app")!;
  const calls: string[] = [];
  const fn: ScoreFn =
    score ??
    (async (password) => {
      calls.push(password);
      return resultFor(password);
    });
  mountMeter(root, fn);
  const input = root.querySelector<HTMLInputElement>("#pw-input")!;
  return {
    input,
    calls,
    type(text: string) {
      input.value = text;
      input.dispatchEvent(new Event("input"));
    },
    async settle() {
      await vi.advanceTimersByTimeAsync(200);
      await vi.advanceTimersByTimeAsync(0);
    },
    el(selector: string) {
      return root.querySelector<HTMLElement>(selector)!;
    },
  };
}

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  vi.useFakeTimers();
});

afterEach(() => {
  vi.useRealTimers();
});

describe("weak verdict with hint chips", () => {
  it("typing 123456 renders weak and both hints", async () => {
    const h = makeHarness();
    h.type("123456");
    await h.settle();
    expect(h.el("#verdict").textContent).toBe("weak");
    const chips = [...h.el("#hints").querySelectorAll("li")].map((li) => li.textContent);
    expect(chips).toEqual(["reach 9 characters", "add a 3rd character class"]);
  });

  it("editing to Abcdef12! clears the hints", async () => {
    const h = makeHarness();
    h.type("123456");
    await h.settle();
    h.type("Abcdef12!");
    await h.settle();
    expect(h.el("#verdict").textContent).toBe("strong");
    expect(h.el("#hints").querySelectorAll("li")).toHaveLength(0);
  });

  it("a single missing rule renders a single chip", async () => {
    const h = makeHarness();
    h.type("Abcdef1!");
    await h.settle();
    const chips = [...h.el("#hints").querySelectorAll("li")].map((li) => li.textContent);
    expect(chips).toEqual(["reach 9 characters"]);
  });
});

describe("debounce and staleness", () => {
  it("rapid typing issues at most a handful of requests and the final verdict matches the final text", async () => {
    const h = makeHarness();
    const text = "Abcdef12!";
    for (let i = 1; i <= text.length; i++) {
      h.type(text.slice(0, i));
      await vi.advanceTimersByTimeAsync(40); // below the 150 ms debounce
    }
    await h.settle();
    expect(h.calls.length).toBeLessThanOrEqual(2);
    expect(h.calls[h.calls.length - 1]).toBe(text);
    expect(h.el("#verdict").textContent).toBe("strong");
  });

  it("a late response for a superseded input is discarded", async () => {
    const resolvers: Array<(r: ReturnType<typeof resultFor>) => void> = [];
    const pending: string[] = [];
    const h = makeHarness((password) => {
      pending.push(password);
      return new Promise((resolve) => resolvers.push((r) => resolve(r)));
    });
    h.type("123456");
    await vi.advanceTimersByTimeAsync(200);
    h.type("Abcdef12!");
    await vi.advanceTimersByTimeAsync(200);
    expect(pending).toEqual(["123456", "Abcdef12!"]);
    // resolve in reverse order: newest first, stale afterwards
    resolvers[1](resultFor("Abcdef12!"));
    await vi.advanceTimersByTimeAsync(0);
    resolvers[0](resultFor("123456"));
    await vi.advanceTimersByTimeAsync(0);
    expect(h.el("#verdict").textContent).toBe("strong");
    expect(h.el("#hints").querySelectorAll("li")).toHaveLength(0);
  });

  it("clearing the field hides the panel without a request", async () => {
    const h = makeHarness();
    h.type("123456");
    await h.settle();
    h.type("");
    await h.settle();
    expect(h.el("#verdict-panel").hidden).toBe(true);
    expect(h.calls).toEqual(["123456"]);
  });
});

describe("error paths", () => {
  it("service unreachable shows a non-blocking banner", async () => {
    const h = makeHarness(async () => {
      throw new Error("connection refused");
    });
    h.type("123456");
    await h.settle();
    const banner = h.el("#error-banner");
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("unreachable");
    expect(h.input.disabled).toBe(false);
  });

  it("validation errors name the violated rule inline", async () => {
    const h = makeHarness();
    h.type("abc");
    await h.settle();
    const validation = h.el("#validation");
    expect(validation.hidden).toBe(false);
    expect(validation.textContent).toContain("length_out_of_range");
    expect(h.el("#verdict-panel").hidden).toBe(true);
  });

  it("recovery after an error clears the banner", async () => {
    let fail = true;
    const h = makeHarness(async (password) => {
      if (fail) throw new Error("down");
      return resultFor(password);
    });
    h.type("123456");
    await h.settle();
    expect(h.el("#error-banner").hidden).toBe(false);
    fail = false;
    h.type("1234567");
    await h.settle();
    expect(h.el("#error-banner").hidden).toBe(true);
    expect(h.el("#verdict").textContent).toBe("weak");
  });
});

describe("response fidelity and privacy", () => {
  it("renders the feature breakdown verbatim from the response", async () => {
    const h = makeHarness();
    h.type("Abcdef12!");
    await h.settle();
    const cells = [...h.el("#features").querySelectorAll("tr")].map((tr) => {
      const [name, value] = tr.querySelectorAll("td");
      return [name.textContent, value.textContent];
    });
    expect(cells).toEqual([
      ["length", "9"],
      ["num_digits", "2"],
      ["num_lowercase", "5"],
      ["num_uppercase", "1"],
      ["num_special_chars", "1"],
      ["char_repeat", "0"],
      ["max_consecutive_chars", "1"],
      ["char_type_changes", "3"],
    ]);
  });

  it("shows the probability bar only when a probability is present", async () => {
    const h = makeHarness(async (password) => {
      const r = resultFor(password);
      if (r.kind === "ok") delete r.body.probability; // svm-style response
      return r;
    });
    h.type("123456");
    await h.settle();
    expect(h.el("#probability-wrap").hidden).toBe(true);
  });

  it("never writes the password to storage or the URL", async () => {
    const h = makeHarness();
    h.type("Abcdef12!");
    await h.settle();
    expect(window.localStorage.length).toBe(0);
    expect(window.sessionStorage.length).toBe(0);
    expect(window.location.href).not.toContain("Abcdef12");
  });
});
