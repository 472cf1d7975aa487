import init, { dispersion_curve, correlator_curve, electron_regimes } from "./pkg/vacuum_brownian_wasm.js";

const $ = (id) => document.getElementById(id);

// Signed log so negative values and the pole stay readable.
const slog = (v) => Math.sign(v) * Math.log10(1 + Math.abs(v));

function plot(canvas, xs, series, { logx = false, transform = (v) => v } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const fx = logx ? Math.log10 : (v) => v;
  const X = xs.map(fx);
  const ys = series.flatMap((s) => s.values.map(transform)).filter(Number.isFinite);
  if (ys.length === 0) return;
  const [x0, x1] = [Math.min(...X), Math.max(...X)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, py(Math.min(Math.max(0, y0), y1)));
  ctx.lineTo(w - pad, py(Math.min(Math.max(0, y0), y1)));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(logx ? `10^${x0.toFixed(1)}` : x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(logx ? `10^${x1.toFixed(1)}` : x1.toPrecision(3), w - pad - 30, h - pad + 14);
  ctx.fillText(y1.toPrecision(3), 2, pad);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    let pen = false;
    s.values.forEach((v, i) => {
      const y = transform(v);
      if (!Number.isFinite(y)) { pen = false; return; }
      if (pen) ctx.lineTo(px(X[i]), py(y)); else ctx.moveTo(px(X[i]), py(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function split(flat) {
  const cols = [[], [], []];
  flat.forEach((v, i) => cols[i % 3].push(v));
  return cols;
}

function drawDispersion() {
  try {
    const [x, closed, asym] = split(dispersion_curve($("q").value, +$("from").value, +$("to").value, 400));
    plot($("disp"), x, [
      { values: closed, color: "#1f77b4" },
      { values: asym, color: "#d62728" },
    ], { logx: true });
  } catch (e) { console.warn(e); }
}

function drawCorrelators() {
  try {
    const [dt, xx, zz] = split(correlator_curve(+$("dtmax").value, 600, +$("eps").value));
    plot($("corr"), dt, [
      { values: xx, color: "#1f77b4" },
      { values: zz, color: "#2ca02c" },
    ], { transform: slog });
  } catch (e) { console.warn(e); }
}

function showReport() {
  try {
    $("report").textContent = JSON.stringify(JSON.parse(electron_regimes(+$("z").value, +$("toz").value)), null, 2);
  } catch (e) { $("report").textContent = String(e); }
}

await init();
for (const id of ["q", "from", "to"]) $(id).addEventListener("input", drawDispersion);
for (const id of ["dtmax", "eps"]) $(id).addEventListener("input", drawCorrelators);
for (const id of ["z", "toz"]) $(id).addEventListener("input", showReport);
drawDispersion();
drawCorrelators();
showReport();
