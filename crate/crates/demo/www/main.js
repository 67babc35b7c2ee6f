import init, { hardy_curve, analyze_mmp, prove_pair, fixture_text } from "./pkg/qgadget_demo.js";

const $ = (id) => document.getElementById(id);

function show(el, json) {
  const v = JSON.parse(json);
  el.classList.toggle("error", "error" in v);
  el.textContent = v.error ?? JSON.stringify(v, null, 2);
  return v;
}

function plot(v) {
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  const ymax = 0.1;
  const x = (a) => pad + a * (w - 2 * pad);
  const y = (p) => h - pad - (p / ymax) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.fillText("α", w / 2, h - 8);
  ctx.fillText("0.1", 2, pad + 4);
  ctx.fillText("0", 16, h - pad);
  ctx.strokeStyle = "#1f5fa8";
  ctx.beginPath();
  v.points.forEach(([a, p], i) => (i ? ctx.lineTo(x(a), y(p)) : ctx.moveTo(x(a), y(p))));
  ctx.stroke();
  ctx.fillStyle = "#c33";
  for (const a of [v.alpha_minus, v.alpha_plus]) {
    ctx.beginPath();
    ctx.arc(x(a), y(v.p_star), 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawCurve() {
  const v = JSON.parse(hardy_curve(Number($("curve-n").value)));
  $("curve-summary").textContent =
    `maximum ${v.p_star.toFixed(6)} at α = ${v.alpha_minus.toFixed(6)} and α = ${v.alpha_plus.toFixed(6)}`;
  plot(v);
}

function loadFixture() {
  const v = JSON.parse(fixture_text($("fixture").value));
  if (!v.error) $("mmp").value = v.json;
}

async function main() {
  await init();
  $("curve-go").onclick = drawCurve;
  $("fixture").onchange = loadFixture;
  $("analyze-go").onclick = () => show($("analysis"), analyze_mmp($("mmp").value));
  $("prove-go").onclick = () => {
    const v = JSON.parse(prove_pair($("mmp").value, $("atom-a").value, $("atom-b").value));
    $("proof").classList.toggle("error", "error" in v);
    $("proof").textContent = v.error ?? v.text;
  };
  loadFixture();
  drawCurve();
}

main();
