// Verb annotation queue. Pending verbs arrive ordered by frequency; each
// decision is one POST, advancing optimistically and rolling back if the
// server rejects it.

import {
  ApiClient,
  ApiError,
  CATEGORIES,
  Category,
  PendingVerb,
  VerbSample,
} from "./api.js";

const KEY_TO_CATEGORY: Record<string, Category> = {
  p: "positive",
  n: "negative",
  u: "neutral",
  d: "depend",
  x: "none",
};

const SAMPLE_SIZE = 10;

export class AnnotateView {
  readonly root: HTMLElement;

  private queue: PendingVerb[] = [];
  private index = 0;
  private sample: VerbSample | null = null;
  private classifiedTotal = 0;
  private totalVerbs = 0;
  private sessionCount = 0;
  private busy = false;
  private offline = false;
  private inflight: Promise<void> = Promise.resolve();

  private progressEl: HTMLElement;
  private bannerEl: HTMLElement;
  private cardEl: HTMLElement;
  private lemmaEl: HTMLElement;
  private countEl: HTMLElement;
  private samplesEl: HTMLUListElement;
  private choicesEl: HTMLElement;
  private completionEl: HTMLElement;
  private rebuildResultEl: HTMLElement;

  private readonly onKeyDown = (ev: KeyboardEvent) => this.handleKey(ev);

  constructor(
    private readonly api: ApiClient,
    container: HTMLElement,
  ) {
    this.root = document.createElement("div");
    this.root.className = "annotate";

    this.progressEl = document.createElement("div");
    this.progressEl.className = "progress";

    this.bannerEl = document.createElement("div");
    this.bannerEl.className = "banner";
    this.bannerEl.hidden = true;

    this.cardEl = document.createElement("div");
    this.cardEl.className = "card";
    const heading = document.createElement("h2");
    this.lemmaEl = document.createElement("span");
    this.lemmaEl.className = "lemma";
    this.countEl = document.createElement("span");
    this.countEl.className = "count";
    heading.append(this.lemmaEl, " ", this.countEl);
    this.samplesEl = document.createElement("ul");
    this.samplesEl.className = "samples";
    this.choicesEl = document.createElement("div");
    this.choicesEl.className = "choices";
    for (const category of CATEGORIES) {
      const btn = document.createElement("button");
      btn.dataset.category = category;
      const kbd = document.createElement("kbd");
      kbd.textContent = shortcutFor(category);
      btn.append(`${category} `, kbd);
      btn.addEventListener("click", () => void this.submit(category));
      this.choicesEl.append(btn);
    }
    this.cardEl.append(heading, this.samplesEl, this.choicesEl);

    this.completionEl = document.createElement("div");
    this.completionEl.className = "completion";
    this.completionEl.hidden = true;
    const doneMsg = document.createElement("p");
    doneMsg.textContent = "all verbs classified";
    const rebuildBtn = document.createElement("button");
    rebuildBtn.className = "rebuild";
    rebuildBtn.textContent = "rebuild graph";
    rebuildBtn.addEventListener("click", () => void this.rebuild());
    this.rebuildResultEl = document.createElement("p");
    this.rebuildResultEl.className = "rebuild-result";
    this.completionEl.append(doneMsg, rebuildBtn, this.rebuildResultEl);

    this.root.append(
      this.progressEl,
      this.bannerEl,
      this.cardEl,
      this.completionEl,
    );
    container.append(this.root);
  }

  mount(): void {
    document.addEventListener("keydown", this.onKeyDown);
  }

  unmount(): void {
    document.removeEventListener("keydown", this.onKeyDown);
  }

  /** Resolves once the current load, submit, or rebuild settles. */
  whenIdle(): Promise<void> {
    return this.inflight.catch(() => undefined);
  }

  load(): Promise<void> {
    this.inflight = this.doLoad();
    return this.inflight;
  }

  private async doLoad(): Promise<void> {
    try {
      const verbs = await this.api.verbs();
      this.queue = verbs.pending;
      this.classifiedTotal = verbs.classified;
      this.totalVerbs = verbs.total;
      this.index = 0;
      if (this.queue.length === 0) {
        this.showCompletion();
      } else {
        await this.showCurrent();
      }
      this.renderProgress();
    } catch (err) {
      this.fail(err);
    }
  }

  private current(): PendingVerb | null {
    return this.index < this.queue.length ? (this.queue[this.index] ?? null) : null;
  }

  private async showCurrent(): Promise<void> {
    const verb = this.current();
    if (verb === null) {
      this.showCompletion();
      return;
    }
    this.completionEl.hidden = true;
    this.cardEl.hidden = false;
    this.lemmaEl.textContent = verb.lemma;
    this.countEl.textContent = `(${verb.count} occurrences)`;
    this.samplesEl.replaceChildren();
    try {
      this.sample = await this.api.sample(verb.lemma, SAMPLE_SIZE);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        // verb vanished from the corpus since harvest
        this.sample = { lemma: verb.lemma, sentences: [] };
      } else {
        this.fail(err);
        return;
      }
    }
    this.renderSamples();
  }

  private renderSamples(): void {
    this.samplesEl.replaceChildren();
    const sentences = this.sample?.sentences ?? [];
    if (sentences.length === 0) {
      const li = document.createElement("li");
      li.className = "no-samples";
      li.textContent = "(no sentences available)";
      this.samplesEl.append(li);
      return;
    }
    for (const s of sentences) {
      const li = document.createElement("li");
      if (s.verb_start !== null && s.verb_end !== null) {
        const mark = document.createElement("mark");
        mark.textContent = s.text.slice(s.verb_start, s.verb_end);
        li.append(s.text.slice(0, s.verb_start), mark, s.text.slice(s.verb_end));
      } else {
        li.textContent = s.text;
      }
      this.samplesEl.append(li);
    }
  }

  private renderProgress(): void {
    const left = Math.max(0, this.queue.length - this.index);
    this.progressEl.textContent = `${left} pending · ${this.classifiedTotal} of ${this.totalVerbs} classified · ${this.sessionCount} this session`;
  }

  private showCompletion(): void {
    this.cardEl.hidden = true;
    this.completionEl.hidden = false;
  }

  private handleKey(ev: KeyboardEvent): void {
    const category = KEY_TO_CATEGORY[ev.key];
    if (category === undefined) return;
    if (ev.ctrlKey || ev.altKey || ev.metaKey) return;
    const target = ev.target as HTMLElement | null;
    if (target !== null && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) return;
    ev.preventDefault();
    void this.submit(category);
  }

  submit(category: Category): Promise<void> {
    if (this.busy || this.offline || this.current() === null) {
      return this.whenIdle();
    }
    this.inflight = this.doSubmit(category);
    return this.inflight;
  }

  private async doSubmit(category: Category): Promise<void> {
    const verb = this.current();
    if (verb === null) return;
    this.busy = true;
    this.hideBanner();
    const prevIndex = this.index;
    const prevSample = this.sample;
    // advance right away; the rollback below restores this verb on failure
    this.index += 1;
    this.renderProgress();
    const advance = this.showCurrent();
    try {
      await this.api.classify(verb.lemma, category);
      this.classifiedTotal += 1;
      this.sessionCount += 1;
      this.renderProgress();
      await advance;
    } catch (err) {
      await advance.catch(() => undefined);
      this.index = prevIndex;
      this.sample = prevSample;
      this.completionEl.hidden = true;
      this.cardEl.hidden = false;
      this.lemmaEl.textContent = verb.lemma;
      this.countEl.textContent = `(${verb.count} occurrences)`;
      this.renderSamples();
      this.renderProgress();
      this.fail(err);
    } finally {
      this.busy = false;
    }
  }

  rebuild(): Promise<void> {
    if (this.busy || this.offline) return this.whenIdle();
    this.inflight = this.doRebuild();
    return this.inflight;
  }

  private async doRebuild(): Promise<void> {
    this.busy = true;
    this.hideBanner();
    this.rebuildResultEl.textContent = "rebuilding…";
    try {
      const result = await this.api.rebuild();
      this.rebuildResultEl.textContent =
        `${result.edges_added} edges added, ${result.edges_removed} removed, ` +
        `${result.edges_sign_changed} sign changes, ${result.edges_total} total`;
    } catch (err) {
      this.rebuildResultEl.textContent = "";
      this.fail(err);
    } finally {
      this.busy = false;
    }
  }

  private fail(err: unknown): void {
    if (err instanceof ApiError && err.status === 0) {
      this.offline = true;
      this.setChoicesDisabled(true);
      this.showBanner("server unreachable", true);
    } else if (err instanceof ApiError) {
      this.showBanner(`error: ${err.message}`, false);
    } else {
      this.showBanner(`error: ${String(err)}`, false);
    }
  }

  private setChoicesDisabled(disabled: boolean): void {
    for (const btn of this.choicesEl.querySelectorAll("button")) {
      btn.disabled = disabled;
    }
  }

  private showBanner(text: string, withRetry: boolean): void {
    this.bannerEl.replaceChildren(text);
    if (withRetry) {
      const retry = document.createElement("button");
      retry.className = "retry";
      retry.textContent = "retry";
      retry.addEventListener("click", () => {
        this.offline = false;
        this.setChoicesDisabled(false);
        this.hideBanner();
        void this.load();
      });
      this.bannerEl.append(" ", retry);
    }
    this.bannerEl.hidden = false;
  }

  private hideBanner(): void {
    this.bannerEl.hidden = true;
    this.bannerEl.replaceChildren();
  }
}

function shortcutFor(category: Category): string {
  for (const [key, cat] of Object.entries(KEY_TO_CATEGORY)) {
    if (cat === category) return key;
  }
  return "";
}
