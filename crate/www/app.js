// Static demo page: no framework, one wasm module, two canvases.
import init, { group_info, spectrum, law_curve } from './pkg/gcirc_wasm.js';

const $ = (id) => document.getElementById(id);
const status = (msg, err = false) => {
  const el = $('status');
  el.textContent = msg;
  el.className = err ? 'err' : '';
};

function clearCanvas(canvas) {
  const ctx = canvas.getContext('2d');
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

// weighted histogram of [value, weight] pairs
function histogram(points, lo, hi, bins) {
  const counts = new Array(bins).fill(0);
  const w = (hi - lo) / bins;
  for (const [x, weight] of points) {
    const b = Math.min(bins - 1, Math.max(0, Math.floor((x - lo) / w)));
    counts[b] += weight / w; // density normalization
  }
  return counts;
}

function axes(ctx, W, H, pad) {
  ctx.strokeStyle = '#d0d7de';
  ctx.lineWidth = 1;
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
}

function drawHistogramWithLaw(canvas, radialPoints, curve) {
  const ctx = clearCanvas(canvas);
  const W = canvas.width, H = canvas.height, pad = 30;
  const hi = Math.max(curve.x[curve.x.length - 1], ...radialPoints.map(p => p[0])) * 1.05;
  const bins = 60;
  const hist = histogram(radialPoints, 0, hi, bins);
  const yMax = Math.max(...hist, ...curve.density) * 1.1 || 1;
  const sx = (x) => pad + (x / hi) * (W - 2 * pad);
  const sy = (y) => H - pad - (y / yMax) * (H - 2 * pad);

  axes(ctx, W, H, pad);
  ctx.fillStyle = 'rgba(9,105,218,0.35)';
  const bw = hi / bins;
  hist.forEach((v, i) => {
    ctx.fillRect(sx(i * bw), sy(v), sx(bw) - sx(0), sy(0) - sy(v));
  });

  ctx.strokeStyle = '#cf222e';
  ctx.lineWidth = 2;
  ctx.beginPath();
  curve.x.forEach((x, i) => {
    const px = sx(x), py = sy(curve.density[i]);
    i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  });
  ctx.stroke();

  ctx.fillStyle = '#57606a';
  ctx.font = '12px system-ui';
  ctx.fillText('0', pad - 4, H - pad + 14);
  ctx.fillText(hi.toFixed(2), W - pad - 14, H - pad + 14);
  ctx.fillText(`theory: ${curve.label}`, pad + 8, pad + 14);
}

function drawEigenScatter(canvas, points, order) {
  const ctx = clearCanvas(canvas);
  const W = canvas.width, H = canvas.height, pad = 10;
  let r = 1.1;
  for (const [re, im] of points) r = Math.max(r, Math.hypot(re, im) * 1.02);
  const s = Math.min(W, H) / 2 - pad;
  const cx = W / 2, cy = H / 2;
  const sx = (x) => cx + (x / r) * s;
  const sy = (y) => cy - (y / r) * s;

  // unit circle (the support boundary of the circular law)
  ctx.strokeStyle = '#d0d7de';
  ctx.beginPath();
  ctx.arc(cx, cy, s / r, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(sx(-r), cy); ctx.lineTo(sx(r), cy);
  ctx.moveTo(cx, sy(-r)); ctx.lineTo(cx, sy(r));
  ctx.stroke();

  ctx.fillStyle = 'rgba(9,105,218,0.45)';
  const dot = order > 500 ? 1.2 : 2;
  for (const [re, im] of points) {
    ctx.beginPath();
    ctx.arc(sx(re), sy(im), dot, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.fillStyle = '#57606a';
  ctx.font = '12px system-ui';
  ctx.fillText('unit circle', cx + s / r * 0.72, cy - s / r * 0.72);
}

function drawLawFamily(canvas, groupSpec, kind) {
  const ctx = clearCanvas(canvas);
  const W = canvas.width, H = canvas.height, pad = 30;
  const family = kind === 'eigen' ? 'theta' : 'rho';
  const curves = [];
  for (const law of [`${family}:1`, `${family}:2`, `${family}:4`, `${family}:inf`, 'mixture']) {
    try {
      curves.push(JSON.parse(law_curve(groupSpec, law, kind, 256)));
    } catch (_) { /* mixture may fail for a bad group; skip */ }
  }
  if (curves.length === 0) return;
  const xHi = Math.max(...curves.map(c => c.x[c.x.length - 1]));
  const yMax = Math.max(...curves.map(c => Math.max(...c.density))) * 1.08;
  const sx = (x) => pad + (x / xHi) * (W - 2 * pad);
  const sy = (y) => H - pad - (y / yMax) * (H - 2 * pad);
  axes(ctx, W, H, pad);
  const colors = ['#8250df', '#0969da', '#1a7f37', '#9a6700', '#cf222e'];
  curves.forEach((c, ci) => {
    ctx.strokeStyle = colors[ci % colors.length];
    ctx.lineWidth = ci === curves.length - 1 ? 2.5 : 1.2;
    ctx.beginPath();
    c.x.forEach((x, i) => {
      const px = sx(x), py = sy(c.density[i]);
      i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.font = '12px system-ui';
    ctx.fillText(c.label, pad + 8, pad + 14 + 14 * ci);
  });
}

function renderInfo(infoJson) {
  const info = JSON.parse(infoJson);
  let out = `group ${info.spec}\norder ${info.order}\n\nirreps:\n`;
  for (const r of info.irreps) out += `  ${r.label.padEnd(14)} dim ${r.dim}\n`;
  out += '\nplancherel masses:\n';
  for (const m of info.masses) {
    out += `  dim ${String(m.dim).padEnd(3)} ${m.numerator}/${m.denominator} = ${m.value.toFixed(6)}\n`;
  }
  $('info').textContent = out;
}

async function refresh() {
  const groupSpec = $('group').value.trim();
  const kind = $('kind').value;
  const noise = $('noise').value;
  const trials = Number($('trials').value);
  const seed = Number($('seed').value) >>> 0;
  const button = $('sample');
  button.disabled = true;
  status('sampling…');
  try {
    renderInfo(group_info(groupSpec));
    const sample = JSON.parse(spectrum(groupSpec, kind, noise, trials, seed));
    if (kind === 'eigen') {
      $('mainTitle').textContent = 'eigenvalues of P_X/√|G| in the complex plane';
      drawEigenScatter($('main'), sample.points, sample.order);
    } else {
      $('mainTitle').textContent = 'pooled singular values vs mixture density';
      const curve = JSON.parse(law_curve(groupSpec, 'mixture', 'singular', 512));
      drawHistogramWithLaw($('main'), sample.points, curve);
    }
    drawLawFamily($('laws'), groupSpec, kind);
    status(`|G| = ${sample.order}, ${sample.points.length} weighted points from ${sample.trials} trials`);
  } catch (e) {
    status(String(e.message ?? e), true);
  } finally {
    button.disabled = false;
  }
}

await init();
$('sample').addEventListener('click', refresh);
$('trials').addEventListener('input', () => { $('trialsLabel').textContent = $('trials').value; });
for (const id of ['kind', 'noise']) $(id).addEventListener('change', refresh);
status('ready');
refresh();
