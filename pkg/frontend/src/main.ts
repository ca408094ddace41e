import { ApiClient } from "./api.js";
import { AnnotateView } from "./annotate.js";
import { ExplorerView } from "./explorer.js";

type Tab = "annotate" | "explore";

function start(): void {
  const app = document.getElementById("app");
  if (app === null) return;

  const api = new ApiClient();
  const nav = document.createElement("nav");
  const annotateBtn = document.createElement("button");
  annotateBtn.textContent = "annotate";
  const exploreBtn = document.createElement("button");
  exploreBtn.textContent = "explore";
  nav.append(annotateBtn, exploreBtn);

  const annotatePane = document.createElement("div");
  const explorePane = document.createElement("div");
  app.append(nav, annotatePane, explorePane);

  const annotate = new AnnotateView(api, annotatePane);
  const explorer = new ExplorerView(api, explorePane);

  let exploreLoaded = false;
  const show = (tab: Tab): void => {
    annotatePane.hidden = tab !== "annotate";
    explorePane.hidden = tab !== "explore";
    annotateBtn.classList.toggle("active", tab === "annotate");
    exploreBtn.classList.toggle("active", tab === "explore");
    if (tab === "annotate") {
      annotate.mount();
    } else {
      annotate.unmount();
      if (!exploreLoaded) {
        exploreLoaded = true;
        void explorer.refresh();
      }
    }
    window.location.hash = tab;
  };
  annotateBtn.addEventListener("click", () => show("annotate"));
  exploreBtn.addEventListener("click", () => show("explore"));

  show(window.location.hash === "#explore" ? "explore" : "annotate");
  void annotate.load();
}

start();
