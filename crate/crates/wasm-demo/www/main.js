import init, { capacity_curves, pie_se, single_mode_landscape } from "./pkg/bosonic_capacity_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"];
const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

// Line plot. `series` is [{label, xs, ys}]; logX/logY switch axes to log10.
function plot(canvas, series, { logX = false, logY = false, xLabel = "", yLabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = { l: 60, r: 15, t: 10, b: 40 };
  ctx.clearRect(0, 0, W, H);
  const fx = logX ? Math.log10 : (v) => v;
  const fy = logY ? Math.log10 : (v) => v;
  const pts = series.map((s) =>
    s.xs.map((x, i) => [fx(x), fy(s.ys[i])]).filter(([a, b]) => Number.isFinite(a) && Number.isFinite(b)));
  const all = pts.flat();
  if (all.length === 0) return;
  let [x0, x1] = [Math.min(...all.map((p) => p[0])), Math.max(...all.map((p) => p[0]))];
  let [y0, y1] = [Math.min(...all.map((p) => p[1])), Math.max(...all.map((p) => p[1]))];
  if (!logY) y0 = Math.min(0, y0);
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) y1 = y0 + 1;
  const sx = (v) => pad.l + (v - x0) / (x1 - x0) * (W - pad.l - pad.r);
  const sy = (v) => H - pad.b - (v - y0) / (y1 - y0) * (H - pad.t - pad.b);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.strokeRect(pad.l, pad.t, W - pad.l - pad.r, H - pad.t - pad.b);
  for (let k = 0; k <= 5; k++) {
    const xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
    const xt = logX ? "1e" + xv.toFixed(1) : xv.toPrecision(3);
    const yt = logY ? "1e" + yv.toFixed(1) : yv.toPrecision(3);
    ctx.fillText(xt, sx(xv) - 12, H - pad.b + 14);
    ctx.fillText(yt, 4, sy(yv) + 4);
  }
  ctx.fillText(xLabel, W / 2 - 20, H - 6);
  ctx.save();
  ctx.translate(12, H / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(yLabel, -20, 0);
  ctx.restore();

  pts.forEach((p, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    p.forEach(([x, y], k) => (k ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
    ctx.stroke();
  });
}

function legend(el, labels) {
  el.innerHTML = labels.map((l, i) => `<span style="color:${COLORS[i % COLORS.length]}">&#9632; ${l}</span>`).join("");
}

function fail(el, e) {
  el.className = "err";
  el.textContent = String(e.message || e);
}

function drawCapacity() {
  const note = $("cap-note");
  note.className = "";
  try {
    const c = JSON.parse(capacity_curves(num("cap-max"), num("cap-nth"), 241));
    const keys = ["holevo", "gaussian", "homodyne", "heterodyne"];
    plot($("cap-plot"), keys.map((k) => ({ label: k, xs: c.nbar, ys: c[k] })),
      { xLabel: "received photons per mode", yLabel: "bits per mode" });
    legend($("cap-legend"), keys);
    const i = c.regime.indexOf("time-share"), j = c.regime.lastIndexOf("time-share");
    note.textContent = i < 0 ? "No time-sharing region on this range."
      : `Time sharing between homodyne and heterodyne for n̄ in [${c.nbar[i].toFixed(3)}, ${c.nbar[j].toFixed(3)}].`;
  } catch (e) {
    fail(note, e);
  }
}

function drawPieSe() {
  try {
    const s = JSON.parse(pie_se(num("pie-min"), num("pie-max"), 81));
    plot($("pie-plot"), s.map((x) => ({ label: x.label, xs: x.points.map((p) => p.se), ys: x.points.map((p) => p.pie) })),
      { logX: true, logY: true, xLabel: "bits per mode", yLabel: "bits per photon" });
    legend($("pie-legend"), s.map((x) => x.label));
  } catch (e) {
    fail($("pie-legend"), e);
  }
}

// Heat map, brighter is larger.
function drawLandscape() {
  const note = $("land-note");
  note.className = "";
  const n = 81;
  try {
    const rmax = num("land-rmax");
    const z = single_mode_landscape(num("land-nbar"), num("land-nth"), n, n, rmax);
    const canvas = $("land-plot"), ctx = canvas.getContext("2d");
    const img = ctx.createImageData(n, n);
    let lo = Infinity, hi = -Infinity, arg = 0;
    z.forEach((v, k) => { lo = Math.min(lo, v); if (v > hi) { hi = v; arg = k; } });
    z.forEach((v, k) => {
      const t = hi > lo ? (v - lo) / (hi - lo) : 0;
      img.data.set([255 * t, 80 + 120 * t * (1 - t), 255 * (1 - t), 255], 4 * k);
    });
    const tmp = document.createElement("canvas");
    tmp.width = tmp.height = n;
    tmp.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
    const row = Math.floor(arg / n), col = arg % n;
    const n1 = 2 * num("land-nbar") * row / (n - 1), r = -rmax + 2 * rmax * col / (n - 1);
    note.textContent = `max ${hi.toFixed(4)} bits at N₁ = ${n1.toFixed(3)}, r = ${r.toFixed(3)}`;
  } catch (e) {
    fail(note, e);
  }
}

await init();
$("status").textContent = "";
for (const id of ["cap-max", "cap-nth"]) $(id).addEventListener("input", drawCapacity);
for (const id of ["land-nbar", "land-nth", "land-rmax"]) $(id).addEventListener("input", drawLandscape);
$("pie-run").addEventListener("click", drawPieSe);
drawCapacity();
drawPieSe();
drawLandscape();
