import init, { bonus_curve, successor_tails, lake_search } from "./pkg/polyuct_wasm.js";

const num = (id) => Number(document.getElementById(id).value);
const LAKE = "SFFFFHFHFFFHHFFG";

function plot(canvas, series, { logY = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const f = (y) => (logY ? Math.log10(Math.max(y, 1e-6)) : y);
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => f(p[1])));
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const px = (x) => 40 + ((x - x0) / (x1 - x0 || 1)) * (w - 60);
  const py = (y) => h - 25 - ((f(y) - y0) / (y1 - y0 || 1)) * (h - 45);
  ctx.fillStyle = "#333";
  ctx.fillText(logY ? `1e${y1.toFixed(1)}` : y1.toPrecision(3), 2, 20);
  ctx.fillText(logY ? `1e${y0.toFixed(1)}` : y0.toPrecision(3), 2, h - 25);
  ctx.fillText(String(x0), 40, h - 8);
  ctx.fillText(String(x1), w - 40, h - 8);
  series.forEach((s, i) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.points.forEach(([x, y], k) => (k ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y))));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, w - 180, 15 + 14 * i);
  });
}

function runBonus() {
  const args = ["b-alpha", "b-beta", "b-xi", "b-eta"].map(num);
  const t = BigInt(Math.max(1, Math.floor(num("b-t"))));
  const values = bonus_curve(...args, t, 200);
  const points = Array.from(values, (v, i) => [i + 1, v]);
  plot(document.getElementById("b-plot"), [{ label: "B(t, s), s = 1..200", color: "#06c", points }], { logY: true });
  document.getElementById("b-note").textContent =
    `B(t, 1) = ${values[0].toPrecision(6)}, B(t, 200) = ${values[199].toPrecision(6)}`;
}

function runTails() {
  const note = document.getElementById("h-note");
  try {
    const rows = JSON.parse(
      successor_tails(num("h-p"), BigInt(num("h-n")), 0.5, num("h-xi"), 6, BigInt(num("h-trials")), BigInt(num("h-seed"))),
    );
    plot(document.getElementById("h-plot"), [
      { label: "upper frequency", color: "#c30", points: rows.map((r) => [r.z, r.upper]) },
      { label: "lower frequency", color: "#393", points: rows.map((r) => [r.z, r.lower]) },
      { label: "bound", color: "#333", points: rows.map((r) => [r.z, r.bound]) },
    ], { logY: true });
    note.textContent = rows.map((r) => `z=${r.z}: ${r.upper.toFixed(4)} / ${r.lower.toFixed(4)} vs ${r.bound.toPrecision(3)}`).join("; ");
  } catch (e) {
    note.textContent = String(e);
  }
}

function runLake() {
  const cells = JSON.parse(lake_search(BigInt(num("l-n")), num("l-depth"), BigInt(num("l-seed"))));
  const grid = document.getElementById("l-grid");
  grid.innerHTML = "";
  for (let r = 0; r < 4; r++) {
    const tr = grid.insertRow();
    for (let c = 0; c < 4; c++) {
      const cell = cells[4 * r + c];
      const td = tr.insertCell();
      td.className = LAKE[cell.state];
      if (cell.terminal) {
        td.textContent = LAKE[cell.state] === "G" ? "goal" : "hole";
        continue;
      }
      const agree = cell.search === cell.best ? "" : " off";
      const means = cell.means.map((m) => (m === null ? "-" : m.toFixed(3))).join(" ");
      td.innerHTML = `V* ${cell.v_star.toFixed(3)}<br>best ${cell.best}<br><span class="${agree}">search ${cell.search}</span><br>${means}`;
    }
  }
}

await init();
document.getElementById("b-run").onclick = runBonus;
document.getElementById("h-run").onclick = runTails;
document.getElementById("l-run").onclick = runLake;
runBonus();
runTails();
