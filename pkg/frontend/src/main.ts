import { ApiClient } from "./api.js";
import { Explorer } from "./state.js";
import { renderAnalysis, renderRanking } from "./render.js";

const BASE_URL =
  (window as unknown as { DDIKIT_BASE_URL?: string }).DDIKIT_BASE_URL ??
  "http://127.0.0.1:8000";

const api = new ApiClient(BASE_URL);
const explorer = new Explorer(api);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function redraw(): void {
  const state = explorer.state;
  el("graph").innerHTML = renderAnalysis(state).svg;
  el("ranking").innerHTML = renderRanking(state);
  const banner = el("banner");
  banner.textContent = state.banner ?? "";
  banner.style.display = state.banner ? "block" : "none";
  const toast = el("toast");
  toast.textContent = state.error ?? "";
  toast.style.display = state.error ? "block" : "none";
  el<HTMLButtonElement>("undo").disabled = !explorer.canUndo;
  el("selection").innerHTML = [...state.covidDrugs, ...state.comorbidityDrugs]
    .map((d) => `<li>${d.label}${state.removed.includes(d.cui) ? " (withdrawn)" : ""}</li>`)
    .join("");
}

async function wireSearch(): Promise<void> {
  const input = el<HTMLInputElement>("search");
  const results = el("search-results");
  const reachable = await api.health();
  if (!reachable) {
    el("offline-banner").style.display = "block";
    input.disabled = true;
    return;
  }
  input.addEventListener("input", async () => {
    const hits = await api.searchDrugs(input.value);
    results.innerHTML = hits
      .map(
        (d) =>
          `<li><span>${d.label}</span>` +
          `<button data-cui="${d.cui}" data-label="${d.label}" data-part="covid">+COVID</button>` +
          `<button data-cui="${d.cui}" data-label="${d.label}" data-part="comorbidity">+comorbidity</button></li>`,
      )
      .join("");
  });
  results.addEventListener("click", async (event) => {
    const button = event.target as HTMLElement;
    if (button.tagName !== "BUTTON") return;
    explorer.addDrug(
      { cui: button.dataset.cui!, label: button.dataset.label! },
      button.dataset.part as "covid" | "comorbidity",
    );
    await explorer.refresh();
    redraw();
  });
}

function wireActions(): void {
  el("ranking").addEventListener("click", async (event) => {
    const button = event.target as HTMLElement;
    if (!button.classList.contains("remove")) return;
    await explorer.whatIfRemove(button.dataset.cui!);
    redraw();
  });
  el("undo").addEventListener("click", () => {
    explorer.undo();
    redraw();
  });
  const filter = el<HTMLInputElement>("confidence");
  filter.addEventListener("input", () => {
    explorer.setConfidenceFilter(Number(filter.value));
    redraw();
  });
}

void wireSearch().then(() => {
  wireActions();
  redraw();
});
