// Browser bootstrap: mount the meter against the configured service and
// show which model is being served.

import { apiBase, modelInfo, scorePassword } from "./api.js";
import { mountMeter } from "./ui.js";

const root = document.getElementById("app");
if (root) {
  const base = apiBase();
  mountMeter(root, (password, signal) => scorePassword(base, password, signal));
  const note = document.getElementById("model-note");
  if (note) {
    modelInfo(base)
      .then((info) => {
        note.textContent = `model: ${info.model_kind} @ ${base}`;
      })
      .catch(() => {
        note.textContent = `no service at ${base} (start: pwlab serve --model model.json)`;
      });
  }
}
