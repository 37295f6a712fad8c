import init, { circumradius_2d, sqrt_j_slack, hexagon_explorer } from "./pkg/radii_demo.js";

const SCALE = 70;

function view(canvas) {
  const ctx = canvas.getContext("2d");
  const cx = canvas.width / 2, cy = canvas.height / 2;
  const toScreen = ([x, y]) => [cx + SCALE * x, cy - SCALE * y];
  const fromEvent = (e) => {
    const r = canvas.getBoundingClientRect();
    return [(e.clientX - r.left - cx) / SCALE, -(e.clientY - r.top - cy) / SCALE];
  };
  const clear = () => {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.strokeStyle = "#eee";
    ctx.beginPath();
    ctx.moveTo(0, cy); ctx.lineTo(canvas.width, cy);
    ctx.moveTo(cx, 0); ctx.lineTo(cx, canvas.height);
    ctx.stroke();
  };
  const dot = (p, color, r = 4) => {
    const [x, y] = toScreen(p);
    ctx.fillStyle = color;
    ctx.beginPath(); ctx.arc(x, y, r, 0, 2 * Math.PI); ctx.fill();
  };
  const poly = (pts, color, close = true) => {
    if (!pts.length) return;
    ctx.strokeStyle = color;
    ctx.beginPath();
    pts.forEach((p, i) => {
      const [x, y] = toScreen(p);
      i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
    });
    if (close) ctx.closePath();
    ctx.stroke();
  };
  const circle = (c, r, color) => {
    const [x, y] = toScreen(c);
    ctx.strokeStyle = color;
    ctx.beginPath(); ctx.arc(x, y, SCALE * r, 0, 2 * Math.PI); ctx.stroke();
  };
  return { ctx, fromEvent, clear, dot, poly, circle };
}

function call(f, ...args) {
  try {
    return [JSON.parse(f(...args)), null];
  } catch (e) {
    return [null, String(e)];
  }
}

function show(el, value, error) {
  el.className = error ? "err" : "";
  el.textContent = error ?? JSON.stringify(value, null, 1);
}

function nearest(pts, p) {
  let best = -1, bd = Infinity;
  pts.forEach((q, i) => {
    const d = Math.hypot(q[0] - p[0], q[1] - p[1]);
    if (d < bd) { bd = d; best = i; }
  });
  return best;
}

function circumradiusView() {
  const canvas = document.getElementById("cir");
  const v = view(canvas);
  const out = document.getElementById("cir-out");
  const gauge = document.getElementById("cir-gauge");
  let pts = [[-1.5, -0.5], [1.2, -1], [0.3, 1.6]];
  const draw = () => {
    v.clear();
    pts.forEach((p) => v.dot(p, "#333"));
    if (!pts.length) { out.textContent = ""; return; }
    const [r, e] = call(circumradius_2d, JSON.stringify(pts), gauge.value);
    if (r) {
      v.poly(r.outline, "#1a6");
      v.dot(r.center, "#1a6", 3);
      (r.certificate?.touch_points ?? []).forEach((p) => v.dot(p, "#d33", 6));
      delete r.outline;
    }
    show(out, r, e);
  };
  canvas.addEventListener("click", (e) => {
    const p = v.fromEvent(e);
    if (e.shiftKey) {
      const i = nearest(pts, p);
      if (i >= 0) pts.splice(i, 1);
    } else {
      pts.push(p);
    }
    draw();
  });
  gauge.addEventListener("change", draw);
  document.getElementById("cir-clear").addEventListener("click", () => { pts = []; draw(); });
  draw();
}

function sumView() {
  const canvas = document.getElementById("sum");
  const v = view(canvas);
  const out = document.getElementById("sum-out");
  const t = Math.SQRT2 - 1;
  const example = () => ({
    k: [[1, 0], [-1, 0], [0, t], [0, -t]],
    l: [[0, 1], [0, -1], [t, 0], [-t, 0]],
  });
  let bodies = example();
  const draw = () => {
    v.clear();
    bodies.k.forEach((p) => v.dot(p, "#25c"));
    bodies.l.forEach((p) => v.dot(p, "#e80"));
    if (!bodies.k.length || !bodies.l.length) { out.textContent = "add points to both bodies"; return; }
    const [r, e] = call(sqrt_j_slack, JSON.stringify(bodies));
    if (r) {
      r.sum_points.forEach((p) => v.dot(p, "#999", 2));
      v.circle(r.sum_center, r.sum_radius, "#1a6");
      delete r.sum_points;
    }
    show(out, r, e);
  };
  canvas.addEventListener("click", (e) => { bodies.k.push(v.fromEvent(e)); draw(); });
  canvas.addEventListener("contextmenu", (e) => {
    e.preventDefault();
    bodies.l.push(v.fromEvent(e));
    draw();
  });
  document.getElementById("sum-reset").addEventListener("click", () => { bodies = example(); draw(); });
  document.getElementById("sum-clear").addEventListener("click", () => { bodies = { k: [], l: [] }; draw(); });
  draw();
}

function hexagonView() {
  const v = view(document.getElementById("hex"));
  const out = document.getElementById("hex-out");
  const sliders = [0, 1, 2].map((i) => document.getElementById(`t${i}`));
  const colors = ["#25c", "#e80", "#a3c"];
  const draw = () => {
    v.clear();
    const angles = sliders.map((s) => (Number(s.value) * Math.PI) / 180);
    angles.forEach((a, i) => {
      const u = [Math.cos(a), Math.sin(a)];
      v.poly([u, [-u[0], -u[1]]], colors[i], false);
      v.dot(u, colors[i]);
      v.dot([-u[0], -u[1]], colors[i]);
    });
    const [r, e] = call(hexagon_explorer, JSON.stringify(angles));
    if (r) {
      v.circle(r.center, r.value, r.hexagon ? "#d33" : "#1a6");
      v.circle([0, 0], 2, "#ccc");
    }
    show(out, r, e);
  };
  sliders.forEach((s) => s.addEventListener("input", draw));
  draw();
}

await init();
circumradiusView();
sumView();
hexagonView();
