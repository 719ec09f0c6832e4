import init, { transition, calibration, portfolio } from "./pkg/lastmile_wasm.js";

const num = (id) => Number(document.getElementById(id).value);
const out = (id, text, error = false) => {
  const el = document.getElementById(id);
  el.textContent = text;
  el.className = error ? "out err" : "out";
};
const pct = (x) => (100 * x).toFixed(2) + "%";

// Line chart of one or more series sharing an x axis, with optional
// horizontal reference line.
function lines(canvasId, series, { ref = null, yLabel = "" } = {}) {
  const c = document.getElementById(canvasId);
  const g = c.getContext("2d");
  const pad = 40, w = c.width - 2 * pad, h = c.height - 2 * pad;
  g.clearRect(0, 0, c.width, c.height);
  const all = series.flatMap((s) => Array.from(s.data)).concat(ref === null ? [] : [ref]);
  const lo = Math.min(0, ...all), hi = Math.max(...all) * 1.05 || 1;
  const n = Math.max(...series.map((s) => s.data.length));
  const x = (i) => pad + (w * i) / Math.max(1, n - 1);
  const y = (v) => pad + h - (h * (v - lo)) / (hi - lo);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, w, h);
  g.fillStyle = "#444";
  g.fillText(hi.toPrecision(3), 2, pad + 4);
  g.fillText(lo.toPrecision(3), 2, pad + h);
  g.fillText(yLabel, pad, pad - 8);
  g.fillText(String(n - 1), pad + w - 10, pad + h + 14);
  if (ref !== null) {
    g.setLineDash([4, 4]);
    g.beginPath();
    g.moveTo(pad, y(ref));
    g.lineTo(pad + w, y(ref));
    g.stroke();
    g.setLineDash([]);
  }
  series.forEach((s, k) => {
    g.strokeStyle = s.color;
    g.beginPath();
    s.data.forEach((v, i) => (i ? g.lineTo(x(i), y(v)) : g.moveTo(x(i), y(v))));
    g.stroke();
    g.fillStyle = s.color;
    g.fillText(s.label, pad + w - 160, pad + 14 + 14 * k);
  });
}

function bars(canvasId, counts, lo, hi, marks) {
  const c = document.getElementById(canvasId);
  const g = c.getContext("2d");
  const pad = 40, w = c.width - 2 * pad, h = c.height - 2 * pad;
  g.clearRect(0, 0, c.width, c.height);
  const top = Math.max(...counts) || 1;
  const bw = w / counts.length;
  g.fillStyle = "#4a7bb7";
  counts.forEach((v, i) => g.fillRect(pad + i * bw, pad + h - (h * v) / top, Math.max(1, bw - 1), (h * v) / top));
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, w, h);
  g.fillStyle = "#444";
  g.fillText(pct(lo), pad, pad + h + 14);
  g.fillText(pct(hi), pad + w - 30, pad + h + 14);
  for (const [label, v, color] of marks) {
    const px = pad + (w * (v - lo)) / (hi - lo);
    g.strokeStyle = color;
    g.beginPath();
    g.moveTo(px, pad);
    g.lineTo(px, pad + h);
    g.stroke();
    g.fillStyle = color;
    g.fillText(label, px + 3, pad + 12);
  }
}

function runTransition() {
  try {
    const t = transition(num("ss-alpha"), num("ss-gamma"), num("ss-r"), num("ss-delta"), num("ss-k0"), num("ss-h"));
    const conv = t.converged_at < 0 ? "not within horizon" : `period ${t.converged_at}`;
    out("ss-out", `s* = ${pct(t.s_star)}   k* = ${t.k_star.toPrecision(5)}   converged: ${conv}`);
    lines("ss-canvas", [
      { data: t.share, color: "#c0392b", label: "structured share" },
    ], { ref: t.s_star, yLabel: "share of labor (dashed: s*)" });
    t.free();
  } catch (e) {
    out("ss-out", String(e.message ?? e), true);
  }
}

function runCalibration() {
  try {
    const started = performance.now();
    const r = calibration(num("mc-lo"), num("mc-hi"), num("mc-n"), num("mc-bins"), num("mc-seed"));
    const ms = (performance.now() - started).toFixed(0);
    out("mc-out", `mean ${pct(r.mean)}   median ${pct(r.median)}   sd ${(100 * r.std_dev).toFixed(2)}pp   ` +
      `P10 ${pct(r.p10)}   P90 ${pct(r.p90)}   (${ms} ms)`);
    bars("mc-canvas", Array.from(r.counts), r.lo, r.hi, [["mean", r.mean, "#c0392b"], ["P10", r.p10, "#777"], ["P90", r.p90, "#777"]]);
    r.free();
  } catch (e) {
    out("mc-out", String(e.message ?? e), true);
  }
}

function runPortfolio() {
  try {
    const p = portfolio(num("pf-rho"), num("pf-mu"), num("pf-env"), num("pf-budget"), num("pf-t"), num("pf-seed"));
    const agg = Array.from(p.aggregate), fams = Array.from(p.families);
    out("pf-out", `structured share ${pct(p.share[0])}   aggregate capability ${agg[0].toPrecision(4)} -> ` +
      `${agg[agg.length - 1].toPrecision(4)}   families ${fams[0]} -> ${fams[fams.length - 1]}`);
    const maxF = Math.max(...fams) || 1, maxA = Math.max(...agg) || 1;
    lines("pf-canvas", [
      { data: agg.map((v) => v / maxA), color: "#c0392b", label: "aggregate capability" },
      { data: fams.map((v) => v / maxF), color: "#2c7a4b", label: "live families" },
    ], { yLabel: "relative to series maximum" });
    p.free();
  } catch (e) {
    out("pf-out", String(e.message ?? e), true);
  }
}

await init();
document.getElementById("ss-run").onclick = runTransition;
document.getElementById("mc-run").onclick = runCalibration;
document.getElementById("pf-run").onclick = runPortfolio;
runTransition();
runCalibration();
runPortfolio();
