/** Hand-rolled SVG charts: horizontal bars, stacked bars, and a color grid. */

const SVG_NS = "http://www.w3.org/2000/svg";

const CATEGORY_COLORS: Record<string, string> = {
  commercial: "#2e7d32",
  unspecified: "#9e9e9e",
  "non-commercial": "#ef6c00",
  "academic-only": "#c62828",
};

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export interface BarDatum {
  label: string;
  value: number;
}

/** Horizontal bar chart; values are shown as percentages of their sum. */
export function barChart(data: BarDatum[], width = 420): SVGSVGElement {
  const rowHeight = 22;
  const labelWidth = 150;
  const svg = svgElement("svg", {
    width,
    height: Math.max(rowHeight * data.length, rowHeight),
    role: "img",
  });
  const total = data.reduce((sum, d) => sum + d.value, 0) || 1;
  const maxValue = Math.max(...data.map((d) => d.value), 1);
  data.forEach((datum, i) => {
    const y = i * rowHeight;
    const barWidth = ((width - labelWidth - 60) * datum.value) / maxValue;
    svg.appendChild(
      svgElement("rect", {
        x: labelWidth,
        y: y + 4,
        width: Math.max(barWidth, 1),
        height: rowHeight - 8,
        fill: "#3f6fb5",
      }),
    );
    const label = svgElement("text", { x: labelWidth - 6, y: y + rowHeight - 7, "text-anchor": "end", "font-size": 12 });
    label.textContent = datum.label;
    svg.appendChild(label);
    const value = svgElement("text", { x: labelWidth + barWidth + 4, y: y + rowHeight - 7, "font-size": 11 });
    value.textContent = `${((100 * datum.value) / total).toFixed(1)}%`;
    svg.appendChild(value);
  });
  return svg;
}

export interface StackedDatum {
  bucket: string;
  byCategory: Record<string, number>;
}

/** One stacked column per bucket, segmented by use category. */
export function stackedBars(data: StackedDatum[], width = 560, height = 220): SVGSVGElement {
  const bottom = 30;
  const svg = svgElement("svg", { width, height, role: "img" });
  if (data.length === 0) return svg;
  const columnWidth = Math.min(48, (width - 20) / data.length);
  const maxTotal = Math.max(
    ...data.map((d) => Object.values(d.byCategory).reduce((a, b) => a + b, 0)),
    1,
  );
  data.forEach((datum, i) => {
    const x = 10 + i * columnWidth;
    let y = height - bottom;
    for (const category of Object.keys(CATEGORY_COLORS)) {
      const count = datum.byCategory[category] ?? 0;
      if (count === 0) continue;
      const segment = ((height - bottom - 10) * count) / maxTotal;
      y -= segment;
      svg.appendChild(
        svgElement("rect", {
          x,
          y,
          width: columnWidth - 6,
          height: segment,
          fill: CATEGORY_COLORS[category],
        }),
      );
    }
    const label = svgElement("text", {
      x: x + (columnWidth - 6) / 2,
      y: height - bottom + 14,
      "text-anchor": "middle",
      "font-size": 10,
    });
    label.textContent = datum.bucket;
    svg.appendChild(label);
  });
  return svg;
}

export function categoryLegend(): HTMLElement {
  const legend = document.createElement("div");
  legend.className = "legend";
  for (const [category, color] of Object.entries(CATEGORY_COLORS)) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = color;
    item.append(swatch, category);
    legend.appendChild(item);
  }
  return legend;
}

/**
 * Country representation scores as a color-scaled tile grid (a simplified
 * stand-in for a choropleth: same encoding, no geography).
 */
export function scoreGrid(scores: Record<string, number>, columns = 8): HTMLElement {
  const container = document.createElement("div");
  container.className = "score-grid";
  container.style.gridTemplateColumns = `repeat(${columns}, 1fr)`;
  const values = Object.values(scores);
  const max = Math.max(...values, 1);
  for (const [country, score] of Object.entries(scores).sort()) {
    const tile = document.createElement("div");
    tile.className = "score-tile";
    const intensity = score / max;
    tile.style.background = `rgba(46, 94, 170, ${0.12 + 0.88 * intensity})`;
    tile.style.color = intensity > 0.55 ? "#fff" : "#123";
    tile.title = `${country}: ${score.toFixed(1)}`;
    tile.textContent = country;
    container.appendChild(tile);
  }
  return container;
}
