// Demo sketch: layered petal rings.
// Parameters are plain top-level variables; the host assigns them before
// calling render(ctx, width, height, rnd). rnd is a seeded [0,1) generator,
// so the same drawing id always reproduces the same image.

var scale = 1.5;
var pinch = 1.0;
var twist = 0.0;
var noise = 0.2;
var symmetry = 6;
var layers = 3;
var detail = 12;

function render(ctx, width, height, rnd) {
  ctx.fillStyle = "#101014";
  ctx.fillRect(0, 0, width, height);
  ctx.save();
  ctx.translate(width / 2, height / 2);

  var base = (Math.min(width, height) / 2) * 0.85;
  for (var layer = 0; layer < layers; layer++) {
    var t = layers > 1 ? layer / (layers - 1) : 0;
    var radius = base * (0.35 + 0.65 * (1 - t)) * (scale / 3.0);
    var rotation = twist * t + noise * (rnd() - 0.5) * Math.PI;
    var hue = Math.floor(200 + 120 * t + 40 * rnd()) % 360;

    ctx.save();
    ctx.rotate(rotation);
    ctx.strokeStyle = "hsl(" + hue + ", 70%, " + (75 - 35 * t) + "%)";
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    var steps = symmetry * detail;
    for (var i = 0; i <= steps; i++) {
      var angle = (i / steps) * Math.PI * 2;
      var lobe = Math.abs(Math.cos((angle * symmetry) / 2));
      var r = radius * Math.pow(lobe, 1 / Math.max(pinch, 0.05));
      r *= 1 + noise * (rnd() - 0.5) * 0.6;
      var x = r * Math.cos(angle);
      var y = r * Math.sin(angle);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.closePath();
    ctx.stroke();
    ctx.restore();
  }
  ctx.restore();
}
