import { ApiClient } from "./api.js";
import { collectEls, ReviewApp } from "./app.js";
import { BrowserStorage, SubmissionQueue } from "./queue.js";

function annotatorId(): string {
  const params = new URLSearchParams(window.location.search);
  const fromUrl = params.get("annotator");
  if (fromUrl) {
    window.localStorage.setItem("review-console.annotator", fromUrl);
    return fromUrl;
  }
  const stored = window.localStorage.getItem("review-console.annotator");
  if (stored) return stored;
  const entered = window.prompt("annotator id:") || "anonymous";
  window.localStorage.setItem("review-console.annotator", entered);
  return entered;
}

window.addEventListener("DOMContentLoaded", () => {
  const api = new ApiClient("");
  const queue = new SubmissionQueue(api, new BrowserStorage());
  const app = new ReviewApp(collectEls(document), api, queue, annotatorId());
  void app.start();
});
