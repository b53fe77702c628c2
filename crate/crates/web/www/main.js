import init, { spectrum, beltramiSlice, autoForceCurve } from "./pkg/nusta_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function showSpectrum() {
  const out = $("sp-out");
  try {
    const doc = JSON.parse(spectrum(num("sp-n"), num("sp-sum")));
    let html = `<p>m = ${doc.params.m_param.toExponential(4)} eV</p>`;
    html += "<table><tr><th>n</th><th>mass (eV)</th></tr>";
    for (const m of doc.masses) html += `<tr><td>${m.n}</td><td>${m.mass_ev.toExponential(4)}</td></tr>`;
    html += "</table><table><tr><th>pair</th><th>Δm² (eV²)</th></tr>";
    for (const d of doc.sq_diffs) html += `<tr><td>${d.i},${d.j}</td><td>${d.value_ev2.toExponential(4)}</td></tr>`;
    out.innerHTML = html + "</table>";
  } catch (e) {
    out.innerHTML = `<p class="err">${e.message ?? e}</p>`;
  }
}

function drawSlice() {
  const cv = $("bf-canvas"), ctx = cv.getContext("2d");
  const n = 24;
  ctx.clearRect(0, 0, cv.width, cv.height);
  let e;
  try {
    e = beltramiSlice(num("bf-l"), num("bf-a"), num("bf-b"), num("bf-c"), num("bf-z"), n);
  } catch (err) {
    ctx.fillStyle = "#b00";
    ctx.fillText(err.message ?? String(err), 10, 20);
    return;
  }
  let emax = 1e-12;
  for (let i = 0; i < e.length; i += 3) emax = Math.max(emax, Math.hypot(e[i], e[i + 1], e[i + 2]));
  const cell = cv.width / n;
  for (let iy = 0; iy < n; iy++) {
    for (let ix = 0; ix < n; ix++) {
      const k = 3 * (iy * n + ix);
      const [ex, ey, ez] = [e[k] / emax, e[k + 1] / emax, e[k + 2] / emax];
      const cx = (ix + 0.5) * cell, cy = cv.height - (iy + 0.5) * cell;
      const r = Math.round(127 + 127 * ez), b = Math.round(127 - 127 * ez);
      ctx.strokeStyle = `rgb(${r},60,${b})`;
      ctx.beginPath();
      ctx.moveTo(cx, cy);
      ctx.lineTo(cx + ex * cell * 0.9, cy - ey * cell * 0.9);
      ctx.stroke();
      ctx.fillStyle = ctx.strokeStyle;
      ctx.fillRect(cx - 1.5, cy - 1.5, 3, 3);
    }
  }
}

function drawForce() {
  const beta = num("af-b");
  $("af-bval").textContent = beta.toFixed(2);
  const cv = $("af-canvas"), ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const c = autoForceCurve(beta, 400);
  let fmax = 1e-12;
  for (let i = 1; i < c.length; i += 2) fmax = Math.max(fmax, c[i]);
  const px = (l) => ((l + Math.PI) / (2 * Math.PI)) * (cv.width - 20) + 10;
  const py = (f) => cv.height - 15 - (f / fmax) * (cv.height - 30);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(10, py(0));
  ctx.lineTo(cv.width - 10, py(0));
  ctx.stroke();
  ctx.strokeStyle = "#06c";
  ctx.beginPath();
  for (let i = 0; i < c.length; i += 2) {
    if (i === 0) ctx.moveTo(px(c[i]), py(c[i + 1]));
    else ctx.lineTo(px(c[i]), py(c[i + 1]));
  }
  ctx.stroke();
  ctx.fillStyle = "#c30";
  for (const l of [beta - Math.PI, beta, beta + Math.PI]) {
    if (l >= -Math.PI && l <= Math.PI) ctx.fillRect(px(l) - 2, py(0) - 2, 4, 4);
  }
  ctx.fillStyle = "#000";
  ctx.fillText("λ = -π", 10, cv.height - 2);
  ctx.fillText("λ = π", cv.width - 40, cv.height - 2);
}

await init();
for (const id of ["sp-n", "sp-sum"]) $(id).addEventListener("input", showSpectrum);
for (const id of ["bf-l", "bf-a", "bf-b", "bf-c", "bf-z"]) $(id).addEventListener("input", drawSlice);
$("af-b").addEventListener("input", drawForce);
showSpectrum();
drawSlice();
drawForce();
