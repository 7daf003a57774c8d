// Canned service responses, captured verbatim from the scoring service.

import { ScoreResponse, ScoreResult, ValidationError } from "../src/api.js";

export const RESPONSES: Record<string, ScoreResponse> = {
  "123456": {
    label: "weak",
    features: {
      length: 6, num_digits: 6, num_lowercase: 0, num_uppercase: 0,
      num_special_chars: 0, char_repeat: 0, max_consecutive_chars: 1,
      char_type_changes: 0,
    },
    rule_label: "weak",
    failed_rules: ["length_lt_9", "class_count_lt_3"],
    probability: 0.0,
  },
  "Abcdef12!": {
    label: "strong",
    features: {
      length: 9, num_digits: 2, num_lowercase: 5, num_uppercase: 1,
      num_special_chars: 1, char_repeat: 0, max_consecutive_chars: 1,
      char_type_changes: 3,
    },
    rule_label: "strong",
    failed_rules: [],
    probability: 1.0,
  },
  "Abcdef1!": {
    label: "weak",
    features: {
      length: 8, num_digits: 1, num_lowercase: 5, num_uppercase: 1,
      num_special_chars: 1, char_repeat: 0, max_consecutive_chars: 1,
      char_type_changes: 3,
    },
    rule_label: "weak",
    failed_rules: ["length_lt_9"],
    probability: 0.0,
  },
};

export const VALIDATIONS: Record<string, ValidationError> = {
  abc: { error: "password length 3 outside [4, 20]", rule: "length_out_of_range" },
};

/** Generic weak response for inputs without a dedicated fixture. */
export function genericResponse(password: string): ScoreResponse {
  return {
    label: "weak",
    features: {
      length: password.length, num_digits: 0, num_lowercase: password.length,
      num_uppercase: 0, num_special_chars: 0, char_repeat: 0,
      max_consecutive_chars: 1, char_type_changes: 0,
    },
    rule_label: "weak",
    failed_rules: password.length >= 9 ? ["class_count_lt_3"] : ["length_lt_9", "class_count_lt_3"],
    probability: 0.0,
  };
}

export function resultFor(password: string): ScoreResult {
  if (password in VALIDATIONS) {
    return { kind: "invalid", body: VALIDATIONS[password] };
  }
  if (password.length < 4 || password.length > 20) {
    return {
      kind: "invalid",
      body: {
        error: `password length ${password.length} outside [4, 20]`,
        rule: "length_out_of_range",
      },
    };
  }
  return { kind: "ok", body: RESPONSES[password] ?? genericResponse(password) };
}
