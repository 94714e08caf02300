import init, { WebPolygon } from "./pkg/hilbert_geom_web.js";

const canvas = document.getElementById("view");
const ctx = canvas.getContext("2d");
const status = document.getElementById("status");
const radius = document.getElementById("radius");
const radiusOut = document.getElementById("radius-out");

const SPAN = 1.5;
const toWorld = (px, py) => [
  (px / canvas.width) * 2 * SPAN - SPAN,
  SPAN - (py / canvas.height) * 2 * SPAN,
];
const toPixel = ([x, y]) => [
  ((x + SPAN) / (2 * SPAN)) * canvas.width,
  ((SPAN - y) / (2 * SPAN)) * canvas.height,
];

let clicks = [];
let polygon = null;
let picks = [];
let chord = null;
let center = null;
let overlay = () => {};

const tool = () => document.querySelector("input[name=tool]:checked").value;
const pairs = (flat) => Array.from({ length: flat.length / 2 }, (_, i) => [flat[2 * i], flat[2 * i + 1]]);

function path(points, close) {
  ctx.beginPath();
  points.forEach((p, i) => {
    const [x, y] = toPixel(p);
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  if (close) ctx.closePath();
}

function dot(p, color, r = 3.5) {
  const [x, y] = toPixel(p);
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fillStyle = color;
  ctx.fill();
}

function segment(a, b, color, dash = []) {
  ctx.setLineDash(dash);
  ctx.strokeStyle = color;
  path([a, b], false);
  ctx.stroke();
  ctx.setLineDash([]);
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (polygon) {
    path(pairs(polygon.vertices()), true);
    ctx.fillStyle = "#f4f6fb";
    ctx.fill();
    ctx.strokeStyle = "#222";
    ctx.lineWidth = 1.5;
    ctx.stroke();
    ctx.lineWidth = 1;
  }
  clicks.forEach((p) => dot(p, "#888", 2.5));
  if (chord) segment(chord[0], chord[1], "crimson");
  overlay();
}

function rebuild() {
  polygon = null;
  if (clicks.length < 3) return;
  try {
    polygon = new WebPolygon(new Float64Array(clicks.flat()));
    status.textContent = `${polygon.vertices().length / 2} vertices`;
  } catch (e) {
    status.textContent = e.message;
  }
}

function showBall() {
  if (!polygon || !center) return;
  const r = Number(radius.value);
  try {
    const ring = pairs(polygon.ball(center[0], center[1], r, 180));
    overlay = () => {
      path(ring, true);
      ctx.strokeStyle = "steelblue";
      ctx.stroke();
      dot(center, "steelblue");
    };
    status.textContent = `ball of radius ${r.toFixed(2)}`;
  } catch (e) {
    status.textContent = e.message;
  }
  draw();
}

function handle(p) {
  const mode = tool();
  if (mode === "draw") {
    clicks.push(p);
    chord = null;
    overlay = () => {};
    rebuild();
    return draw();
  }
  if (!polygon) {
    status.textContent = "place at least three points first";
    return;
  }
  if (mode === "distance") {
    picks.push(p);
    if (picks.length === 2) {
      const [a, b] = picks;
      picks = [];
      try {
        const [d, z1x, z1y, z2x, z2y] = polygon.distance(a[0], a[1], b[0], b[1]);
        overlay = () => {
          segment([z1x, z1y], [z2x, z2y], "#999", [4, 4]);
          segment(a, b, "darkorange");
          [a, b].forEach((q) => dot(q, "darkorange"));
          [[z1x, z1y], [z2x, z2y]].forEach((q) => dot(q, "#555", 3));
        };
        status.textContent = `d = ${d.toFixed(9)}`;
      } catch (e) {
        status.textContent = e.message;
      }
    } else {
      overlay = () => dot(p, "darkorange");
    }
  } else if (mode === "ball") {
    center = p;
    return showBall();
  } else if (mode === "project") {
    if (!chord || picks.length === 1) {
      picks.push(p);
      if (picks.length === 2) {
        const [a, b] = picks;
        picks = [];
        try {
          const e = polygon.set_chord(a[0], a[1], b[0], b[1]);
          chord = [[e[0], e[1]], [e[2], e[3]]];
          status.textContent = "chord set; click interior points";
        } catch (err) {
          chord = null;
          status.textContent = err.message;
        }
        overlay = () => {};
      }
    } else {
      try {
        const [px, py, fx, fy] = polygon.project(p[0], p[1]);
        overlay = () => {
          segment(p, [px, py], "seagreen", [5, 3]);
          dot(p, "seagreen");
          dot([px, py], "crimson");
          if (Number.isFinite(fx)) dot([fx, fy], "purple", 4.5);
        };
        const hat = Number.isFinite(fx) ? `(${fx.toFixed(4)}, ${fy.toFixed(4)})` : "at infinity";
        status.textContent = `image (${px.toFixed(6)}, ${py.toFixed(6)}); pseudo-dual point ${hat}`;
      } catch (e) {
        status.textContent = e.message;
      }
    }
  }
  draw();
}

canvas.addEventListener("click", (ev) => {
  const box = canvas.getBoundingClientRect();
  handle(toWorld(ev.clientX - box.left, ev.clientY - box.top));
});
radius.addEventListener("input", () => {
  radiusOut.textContent = Number(radius.value).toFixed(2);
  showBall();
});
document.getElementById("reset").addEventListener("click", () => {
  clicks = [];
  picks = [];
  chord = null;
  center = null;
  polygon = null;
  overlay = () => {};
  status.textContent = "";
  draw();
});

await init();
clicks = [[-1, -0.8], [1.1, -0.9], [0.9, 1], [-0.7, 0.9]];
rebuild();
draw();
