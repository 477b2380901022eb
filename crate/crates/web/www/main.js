// Built by `wasm-pack build crates/web --target web --out-dir www/pkg`.
import init, { conditionProfile, greenField, scatter } from "./pkg/wavebound_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function shape() {
  const kind = $("kind").value;
  const s = { kind, center: [num("c1"), num("c2")] };
  if (kind === "ellipse") s.semiaxes = [num("ra"), num("rb")];
  else s.radius = num("ra");
  if (kind === "fourier") s.coeffs = [0, 0, num("k2"), 0];
  return s;
}

function fail(target, e) {
  target.textContent = String(e);
  target.className = "err";
}

// Maps a box in the water to canvas pixels, x2 downward.
function frame(canvas, x1, x2) {
  const sx = canvas.width / (x1[1] - x1[0]);
  const sy = canvas.height / (x2[1] - x2[0]);
  const s = Math.min(sx, sy);
  return ([a, b]) => [(a - x1[0]) * s, (b - x2[0]) * s];
}

function drawContour() {
  const out = $("conditions");
  out.className = "";
  let p;
  try {
    p = JSON.parse(conditionProfile(JSON.stringify(shape()), num("eps")));
  } catch (e) {
    return fail(out, e);
  }
  const c = $("contour");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const box = p.geometry;
  const w = Math.max(box.half_width * 1.6, 2);
  const to = frame(c, [-w, w], [0, box.max_depth * 1.25]);
  g.strokeStyle = "#48c";
  g.beginPath();
  g.moveTo(0, 1);
  g.lineTo(c.width, 1);
  g.stroke();
  // Colour each contour segment by the worst of the condition slacks.
  const n = p.samples.length;
  for (let i = 0; i < n; i++) {
    const a = p.samples[i];
    const b = p.samples[(i + 1) % n];
    const ok = a.condition1 >= -1e-12 && (a.condition2 === null || a.condition2 >= -1e-12);
    g.strokeStyle = ok ? "#2a2" : "#d22";
    g.lineWidth = 3;
    g.beginPath();
    g.moveTo(...to(a.x));
    g.lineTo(...to(b.x));
    g.stroke();
  }
  const fmt = (v) => (v === null ? "—" : typeof v === "number" ? v.toPrecision(6) : v);
  out.textContent = [
    `L = ${fmt(box.half_width)}, h = ${fmt(box.min_depth)}, H = ${fmt(box.max_depth)}, κ = ${fmt(box.curvature)}`,
    `condition 1: ${p.condition1}`,
    `condition 2: ${fmt(p.condition2)} at ε = ${fmt(p.epsilon)} (largest admissible ${fmt(p.epsilon_max)})`,
    `Maz'ya condition: ${p.mazya}`,
  ].join("\n");
}

function drawGreen() {
  const c = $("greenmap");
  const g = c.getContext("2d");
  const nx = 150, nz = 60;
  let f;
  try {
    const grid = { nu: num("gnu"), source: [num("s1"), num("s2")], x1: [-10, 10], x2: [0, 8], nx, nz };
    f = JSON.parse(greenField(JSON.stringify(grid)));
  } catch (e) {
    g.clearRect(0, 0, c.width, c.height);
    g.fillText(String(e), 10, 20);
    return;
  }
  const v = f[$("part").value];
  // Clip the logarithmic peak so the waves stay visible.
  const finite = v.filter((x) => x !== null).map(Math.abs).sort((a, b) => a - b);
  const scale = finite[Math.floor(0.97 * (finite.length - 1))] || 1;
  const cw = c.width / nx, ch = c.height / nz;
  for (let j = 0; j < nz; j++) {
    for (let i = 0; i < nx; i++) {
      const x = v[j * nx + i];
      const t = x === null ? 0 : Math.max(-1, Math.min(1, x / scale));
      const r = t > 0 ? 255 : Math.round(255 * (1 + t));
      const b = t < 0 ? 255 : Math.round(255 * (1 - t));
      const gr = Math.round(255 * (1 - Math.abs(t)));
      g.fillStyle = `rgb(${r},${gr},${b})`;
      g.fillRect(i * cw, j * ch, cw + 1, ch + 1);
    }
  }
}

function drawSurface() {
  const out = $("amplitudes");
  out.className = "";
  const input = {
    shape: shape(),
    nu: num("snu"),
    panels: parseInt($("panels").value, 10),
    data: { g1: { kind: "fourier", cos: [num("g0")], sin: [num("gs")] } },
    span: 12,
  };
  let s;
  try {
    s = JSON.parse(scatter(JSON.stringify(input)));
  } catch (e) {
    return fail(out, e);
  }
  const c = $("surface");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const amp = s.surface_re.map((re, k) => Math.hypot(re, s.surface_im[k]));
  const top = Math.max(...amp) || 1;
  const px = (k) => (k / (amp.length - 1)) * c.width;
  const py = (y) => c.height / 2 - (0.45 * c.height * y) / top;
  const line = (ys, colour) => {
    g.strokeStyle = colour;
    g.beginPath();
    ys.forEach((y, k) => (k ? g.lineTo(px(k), py(y)) : g.moveTo(px(k), py(y))));
    g.stroke();
  };
  line(s.surface_re, "#36c");
  line(amp, "#999");
  const abs = ([a, b]) => Math.hypot(a, b).toPrecision(6);
  out.textContent = [
    `d+ = ${s.d_plus[0].toPrecision(6)} ${s.d_plus[1] < 0 ? "-" : "+"} ${Math.abs(s.d_plus[1]).toPrecision(6)}i   |d+| = ${abs(s.d_plus)}`,
    `d- = ${s.d_minus[0].toPrecision(6)} ${s.d_minus[1] < 0 ? "-" : "+"} ${Math.abs(s.d_minus[1]).toPrecision(6)}i   |d-| = ${abs(s.d_minus)}`,
    `Kochin vs far-field fit: ${s.discrepancy.toExponential(2)}`,
    "blue: Re u on the surface, grey: |u|",
  ].join("\n");
}

await init();
$("check").onclick = drawContour;
$("green").onclick = drawGreen;
$("solve").onclick = drawSurface;
drawContour();
drawGreen();
