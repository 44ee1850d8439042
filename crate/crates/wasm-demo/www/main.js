import init, { factor_demo, loss_curve, heatmap } from "./pkg/weighted_qr_demo.js";

const METHODS = ["mgs-naive-col", "mgs-ha-col", "mgs-hp-col", "cgs-naive-col", "cgs-ha-col", "cgs-hp-col", "cholqr"];
const COLORS = ["#1f77b4", "#2ca02c", "#17becf", "#d62728", "#ff7f0e", "#e377c2", "#7f7f7f"];

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (v) => (v == null ? "–" : v.toExponential(2));

function problem() {
  return { c: num("case"), m: num("m"), n: num("n"), seed: num("seed") };
}

function parse(text, target) {
  const v = JSON.parse(text);
  if (v.error) {
    target.innerHTML = `<p class="err">${v.error}</p>`;
    return null;
  }
  return v;
}

function runFactor() {
  const { c, m, n, seed } = problem();
  const out = $("factor-out");
  const v = parse(factor_demo(c, m, n, num("fa"), num("fz"), seed, "all"), out);
  if (!v) return;
  const rows = v.methods
    .map((r) => `<tr><td>${r.method}</td><td>${r.status}</td><td>${fmt(r.loss_a_orth)}</td><td>${fmt(r.rep_error_rel)}</td><td>${r.mv_count}</td></tr>`)
    .join("");
  out.innerHTML =
    `<p>measured κ(A) = ${fmt(v.kappa_a)}, κ(A<sup>1/2</sup>Z) = ${fmt(v.kappa_az)}, ` +
    `δ1 = ${fmt(v.delta1)}, δ2 = ${fmt(v.delta2)}</p>` +
    `<table><tr><th>method</th><th>status</th><th>‖QᵀAQ − I‖</th><th>‖Z − QR‖/‖Z‖</th><th>MVs</th></tr>${rows}</table>`;
}

function axes(ctx, w, h, pad, xr, yr, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.strokeRect(pad, pad / 2, w - 1.5 * pad, h - 1.5 * pad);
  for (let e = Math.ceil(xr[0]); e <= xr[1]; e += 2) {
    const x = pad + ((e - xr[0]) / (xr[1] - xr[0])) * (w - 1.5 * pad);
    ctx.fillText(`1e${e}`, x - 10, h - pad + 16);
  }
  for (let e = Math.ceil(yr[0]); e <= yr[1]; e += 2) {
    const y = h - pad - ((e - yr[0]) / (yr[1] - yr[0])) * (h - 1.5 * pad);
    ctx.fillText(`1e${e}`, 4, y + 4);
  }
  ctx.fillText(xlabel, w / 2 - 30, h - 4);
  ctx.save();
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, -h / 2 - 20, 12);
  ctx.restore();
}

function runCurve() {
  const { c, m, n, seed } = problem();
  const legend = $("curve-legend");
  const v = parse(loss_curve(c, m, n, num("ca"), num("clo"), num("chi"), num("cstep"), seed, "all"), legend);
  if (!v) return;
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const [w, h, pad] = [canvas.width, canvas.height, 50];
  const xs = v.kappa_az.map((k) => (k == null ? null : Math.log10(k)));
  const ys = v.series.flatMap((s) => s.loss.filter((l) => l != null && l > 0).map(Math.log10));
  const xr = [Math.min(...xs.filter((x) => x != null)), Math.max(...xs.filter((x) => x != null))];
  const yr = [Math.floor(Math.min(-17, ...ys)), Math.ceil(Math.max(0, ...ys))];
  axes(ctx, w, h, pad, xr, yr, "κ(A^1/2 Z)", "loss of A-orthogonality");
  const px = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0] || 1)) * (w - 1.5 * pad);
  const py = (y) => h - pad - ((y - yr[0]) / (yr[1] - yr[0])) * (h - 1.5 * pad);
  v.series.forEach((s, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.beginPath();
    let pen = false;
    s.loss.forEach((l, k) => {
      if (l == null || l <= 0 || xs[k] == null) {
        pen = false;
        return;
      }
      const [x, y] = [px(xs[k]), py(Math.log10(l))];
      pen ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
      pen = true;
    });
    ctx.stroke();
  });
  legend.innerHTML = v.series.map((s, i) => `<span style="color:${COLORS[i % COLORS.length]}">■ ${s.method}</span>`).join("");
}

function color(t) {
  // t in [0, 1]: dark blue (accurate) to yellow (orthogonality lost)
  const r = Math.round(255 * Math.min(1, 1.6 * t));
  const g = Math.round(255 * Math.min(1, Math.max(0, 1.8 * t - 0.3)));
  const b = Math.round(255 * Math.max(0, 0.6 - t));
  return `rgb(${r},${g},${b})`;
}

function runHeat() {
  const { c, m, n, seed } = problem();
  const note = $("heat-note");
  const v = parse(heatmap(c, m, n, num("hlo"), num("hhi"), num("hstep"), seed, $("hmethod").value), note);
  if (!v) return;
  const canvas = $("heat");
  const ctx = canvas.getContext("2d");
  const k = v.exponents.length;
  const pad = 40;
  const cell = (canvas.width - pad) / k;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let i = 0; i < k; i++) {
    for (let j = 0; j < k; j++) {
      const l = v.log_loss[i][j];
      const s = v.status[i][j];
      ctx.fillStyle = s === "infeasible" ? "#fff" : l == null ? "#000" : color((l + 16) / 16);
      ctx.fillRect(pad + j * cell, (k - 1 - i) * cell, cell, cell);
    }
  }
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText("κ(A^1/2 Z) →", pad + 4, canvas.height - 4);
  ctx.save();
  ctx.rotate(-Math.PI / 2);
  ctx.fillText("κ(A) →", -canvas.height + pad + 4, 12);
  ctx.restore();
  note.textContent = `${v.method}: exponents ${v.exponents[0]}..${v.exponents[k - 1]}; ` +
    "blue = loss near 1e-16, yellow = 1, black = failed, white = infeasible.";
}

await init();
$("hmethod").innerHTML = METHODS.map((m) => `<option>${m}</option>`).join("");
$("run-factor").onclick = runFactor;
$("run-curve").onclick = runCurve;
$("run-heat").onclick = runHeat;
runFactor();
