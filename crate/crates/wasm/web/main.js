import init, { Cube, klee_minty_sweep, hvector_bounds } from "./pkg/ausolab_wasm.js";

const $ = (id) => document.getElementById(id);

function report(el, text, isError = false) {
  el.textContent = text;
  el.className = isError ? "err" : "";
}

// Vertices sit on rows by rank (source on top); the column comes from a
// projection of the bit vector so neighbouring vertices stay close.
function layout(cube, width, height) {
  const d = cube.dim();
  const ranks = cube.ranks();
  const n = ranks.length;
  const proj = (v) => {
    let x = 0;
    for (let i = 0; i < d; i++) x += ((v >> i) & 1 ? 1 : -1) * Math.cos((Math.PI * (i + 0.5)) / d);
    return x;
  };
  const xs = Array.from({ length: n }, (_, v) => proj(v));
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  const span = hi - lo || 1;
  return Array.from({ length: n }, (_, v) => ({
    x: 30 + ((xs[v] - lo) / span) * (width - 60),
    y: 20 + (1 - ranks[v] / Math.max(n - 1, 1)) * (height - 40),
  }));
}

function drawCube(cube, path) {
  const canvas = $("cube-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pos = layout(cube, canvas.width, canvas.height);
  const d = cube.dim();
  ctx.strokeStyle = "#ddd";
  ctx.lineWidth = 1;
  for (let v = 0; v < pos.length; v++) {
    for (let i = 0; i < d; i++) {
      const w = v ^ (1 << i);
      if (w > v) {
        ctx.beginPath();
        ctx.moveTo(pos[v].x, pos[v].y);
        ctx.lineTo(pos[w].x, pos[w].y);
        ctx.stroke();
      }
    }
  }
  if (path && path.length > 1) {
    ctx.strokeStyle = "#d04020";
    ctx.lineWidth = 2.5;
    ctx.beginPath();
    ctx.moveTo(pos[path[0]].x, pos[path[0]].y);
    for (const v of path.slice(1)) ctx.lineTo(pos[v].x, pos[v].y);
    ctx.stroke();
  }
  const ranks = cube.ranks();
  const radius = d <= 5 ? 5 : 3;
  for (let v = 0; v < pos.length; v++) {
    ctx.fillStyle = ranks[v] === 0 ? "#208040" : v === cube.source() ? "#2050c0" : "#555";
    ctx.beginPath();
    ctx.arc(pos[v].x, pos[v].y, radius, 0, 2 * Math.PI);
    ctx.fill();
  }
}

let cube = null;

function buildCube() {
  try {
    if (cube) cube.free();
    cube = new Cube($("cube-family").value, Number($("cube-d").value), Number($("cube-seed").value));
    const s = cube.source();
    const [mean, stderr] = cube.sample(s, 20000, 1);
    drawCube(cube, null);
    report(
      $("cube-out"),
      `vertices=${cube.ranks().length} source=${s}\n` +
        `expected visits=${cube.expected(s).toFixed(6)}  sampled=${mean.toFixed(4)} ± ${stderr.toFixed(4)} (20000 runs)`,
    );
  } catch (e) {
    cube = null;
    report($("cube-out"), String(e.message ?? e), true);
  }
}

let walkSeed = 0;

function showWalk(kind) {
  if (!cube) buildCube();
  if (!cube) return;
  const path = kind === "greedy" ? cube.greatest_decrease(cube.source()) : cube.random_edge(cube.source(), walkSeed++);
  drawCube(cube, path);
  report($("cube-out"), `${kind} visits ${path.length} vertices: ${Array.from(path).join(" ")}`);
}

function drawSweep(rows) {
  const canvas = $("sweep-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const count = rows.length / 4;
  const series = [
    { col: 1, color: "#d04020", name: "expected" },
    { col: 2, color: "#2050c0", name: "maxmin" },
    { col: 3, color: "#808080", name: "13n/sqrt(d)" },
  ];
  let top = 0;
  for (let i = 0; i < rows.length; i++) if (i % 4 !== 0) top = Math.max(top, Math.log2(rows[i]));
  const px = (i) => 40 + (i / Math.max(count - 1, 1)) * (canvas.width - 80);
  const py = (v) => canvas.height - 25 - (Math.log2(v) / (top || 1)) * (canvas.height - 50);
  series.forEach(({ col, color, name }, s) => {
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    for (let i = 0; i < count; i++) {
      const y = py(rows[4 * i + col]);
      i === 0 ? ctx.moveTo(px(i), y) : ctx.lineTo(px(i), y);
    }
    ctx.stroke();
    ctx.fillText(name, 50, 15 + 14 * s);
  });
  ctx.fillStyle = "#222";
  for (let i = 0; i < count; i++) ctx.fillText(`d=${rows[4 * i]}`, px(i) - 10, canvas.height - 8);
}

function runSweep() {
  try {
    const rows = klee_minty_sweep(Number($("sweep-d").value));
    drawSweep(rows);
    const lines = ["d   expected       maxmin         13n/sqrt(d)"];
    for (let i = 0; i < rows.length; i += 4) {
      lines.push(
        [String(rows[i]).padEnd(3), ...[1, 2, 3].map((c) => rows[i + c].toFixed(4).padEnd(14))].join(" "),
      );
    }
    report($("sweep-out"), lines.join("\n"));
  } catch (e) {
    report($("sweep-out"), String(e.message ?? e), true);
  }
}

function runBounds() {
  try {
    const h = $("h-input")
      .value.split(/[\s,]+/)
      .filter((s) => s.length > 0)
      .map((s) => {
        const v = Number(s);
        if (!Number.isInteger(v) || v < 0) throw new Error(`not a count: ${s}`);
        return v;
      });
    const [maxmin, q, half, one, t1, sym, uni] = hvector_bounds(new Uint32Array(h));
    report(
      $("h-out"),
      `maxmin       ${maxmin.toFixed(6)}\n` +
        `dual y=1/4   ${q.toFixed(6)}\ndual y=1/2   ${half.toFixed(6)}\ndual y=1     ${one.toFixed(6)}\n` +
        `13n/sqrt(d)  ${Number.isNaN(t1) ? "n/a" : t1.toFixed(6)}\n` +
        `symmetric=${sym === 1} unimodal=${uni === 1}`,
    );
  } catch (e) {
    report($("h-out"), String(e.message ?? e), true);
  }
}

await init();
$("cube-build").onclick = buildCube;
$("cube-walk").onclick = () => showWalk("random-edge");
$("cube-greedy").onclick = () => showWalk("greedy");
$("sweep-run").onclick = runSweep;
$("h-run").onclick = runBounds;
buildCube();
runSweep();
runBounds();
