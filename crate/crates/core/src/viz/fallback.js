(function () {
  "use strict";
  var view = document.getElementById("cg-view");
  var doc;
  try {
    doc = JSON.parse(document.getElementById("cg-data").textContent);
  } catch (err) {
    view.textContent = "Could not read graph data: " + err;
    return;
  }
  var CREATOR = "http://causalgraph.org/causalgraph#Creator";
  var nodes = doc.nodes.filter(function (n) {
    return !(n.types.length === 1 && n.types[0] === CREATOR);
  });
  if (nodes.length === 0) {
    view.textContent = "empty graph";
    return;
  }
  var svgNS = "http://www.w3.org/2000/svg";
  var size = Math.max(320, 90 * Math.sqrt(nodes.length) * 2);
  var r = size / 2 - 60;
  var pos = {};
  nodes.forEach(function (n, i) {
    var a = (2 * Math.PI * i) / nodes.length - Math.PI / 2;
    pos[n.name] = { x: size / 2 + r * Math.cos(a), y: size / 2 + r * Math.sin(a) };
  });
  function el(tag, attrs, parent) {
    var e = document.createElementNS(svgNS, tag);
    Object.keys(attrs).forEach(function (k) { e.setAttribute(k, attrs[k]); });
    parent.appendChild(e);
    return e;
  }
  function short(iri) {
    var cut = Math.max(iri.lastIndexOf("#"), iri.lastIndexOf("/"));
    return iri.slice(cut + 1);
  }
  var svg = el("svg", { width: size, height: size, viewBox: "0 0 " + size + " " + size }, view);
  var marker = el("marker", { id: "arrow", viewBox: "0 0 10 10", refX: 10, refY: 5, markerWidth: 8, markerHeight: 8, orient: "auto" }, el("defs", {}, svg));
  el("path", { d: "M0,0 L10,5 L0,10 z", fill: "#555" }, marker);
  doc.edges.forEach(function (e) {
    var a = pos[e.cause], b = pos[e.effect];
    if (!a || !b) return;
    var dx = b.x - a.x, dy = b.y - a.y, d = Math.sqrt(dx * dx + dy * dy) || 1;
    var g = el("g", { "class": "cg-edge" }, svg);
    el("line", { x1: a.x + dx * 22 / d, y1: a.y + dy * 22 / d, x2: b.x - dx * 22 / d, y2: b.y - dy * 22 / d, stroke: "#555", "marker-end": "url(#arrow)" }, g);
    var meta = [];
    if (e.props.confidence != null) meta.push("c=" + e.props.confidence);
    if (e.props.time_lag_s != null) meta.push("lag=" + e.props.time_lag_s + "s");
    if (meta.length) {
      el("text", { x: (a.x + b.x) / 2, y: (a.y + b.y) / 2 - 4, "font-size": 11, "text-anchor": "middle", fill: "#333" }, g).textContent = meta.join(", ");
    }
    el("title", {}, g).textContent = [e.name].concat(meta, e.props.comments).join("\n");
  });
  nodes.forEach(function (n) {
    var p = pos[n.name];
    var g = el("g", { "class": "cg-node" }, svg);
    el("circle", { cx: p.x, cy: p.y, r: 20, fill: "#cfe3f7", stroke: "#3a6ea5" }, g);
    el("text", { x: p.x, y: p.y + 34, "font-size": 12, "text-anchor": "middle" }, g).textContent = n.name;
    el("title", {}, g).textContent = [n.types.map(short).join(", ")].concat(n.props.comments).join("\n");
  });
})();
