#!/usr/bin/env python3
"""Regenerate tests/data: a user table plus chart/table/metric artifacts
shaped like the files pyecharts, pandas and json.dump produce."""

import csv
import io
import json
import random
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "data"

REGIONS = ["North", "South", "East", "West", "Central", "Northeast", "Northwest", "Southeast", "Southwest", "Coastal", "Inland", "Metro"]
PRODUCTS = ["Laptop", "Tablet", "Phone", "Monitor", "Router", "Camera", "Speaker", "Watch", "Printer", "Keyboard", "Drive", "Dock"]
MONTHS = [f"2024-{m:02d}" for m in range(1, 13)]

rng = random.Random(20240917)


def chart_html(chart_id, kind, title, x, series):
    option = {
        "animation": True,
        "backgroundColor": "transparent",
        "series": [
            {"type": kind, "name": name, "data": data, "label": {"show": False}}
            for name, data in series
        ],
        "legend": [{"data": [n for n, _ in series], "top": "top", "textStyle": {"color": "#00E5FF"}}],
        "title": [{"text": title}],
    }
    if kind != "pie":
        option["xAxis"] = [{"type": "category", "data": x}]
        option["yAxis"] = [{"type": "value"}]
    body = json.dumps(option, indent=4, ensure_ascii=False)
    return f"""<!DOCTYPE html>
<html>
<head>
    <meta charset="UTF-8">
    <title>Awesome-pyecharts</title>
            <script type="text/javascript" src="https://assets.pyecharts.org/assets/v5/echarts.min.js"></script>

</head>
<body >
    <div id="{chart_id}" class="chart-container" style="width:900px; height:500px; "></div>
    <script>
        var chart_{chart_id} = echarts.init(
            document.getElementById('{chart_id}'), 'white', {{renderer: 'canvas'}});
        var option_{chart_id} = {body};
        chart_{chart_id}.setOption(option_{chart_id});
    </script>
</body>
</html>
"""


def chart_id():
    return "".join(rng.choice("0123456789abcdef") for _ in range(32))


def write(name, text):
    (OUT / name).write_text(text, encoding="utf-8", newline="")


def write_csv(name, header, rows, index=False):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if index:
        w.writerow([""] + header)
        for i, r in enumerate(rows):
            w.writerow([i] + r)
    else:
        w.writerow(header)
        w.writerows(rows)
    write(name, buf.getvalue())


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    # user table
    rows = []
    for month in MONTHS:
        for region in REGIONS[:4]:
            product = rng.choice(PRODUCTS)
            units = rng.randint(20, 400)
            price = rng.choice([199, 349, 499, 899, 1299])
            rows.append([month, region, product, units, units * price])
    write_csv("sales.csv", ["month", "region", "product", "units", "revenue"], rows)

    # charts
    monthly = [rng.randint(40000, 90000) for _ in MONTHS]
    write("sales_trend.html", chart_html(chart_id(), "line", "Monthly revenue", MONTHS, [("revenue", monthly)]))
    write("category_share.html", chart_html(chart_id(), "pie", "Revenue share", [],
                                            [("share", [{"name": p, "value": rng.randint(5, 40)} for p in PRODUCTS[:6]])]))
    write("region_bar.html", chart_html(chart_id(), "bar", "Units by region", REGIONS[:6],
                                        [("units", [rng.randint(300, 2000) for _ in range(6)])]))
    write("units_scatter.html", chart_html(chart_id(), "scatter", "Units vs revenue", [str(u) for u in range(10)],
                                           [("orders", [rng.randint(1, 99) for _ in range(10)])]))
    write("new_chart.html", chart_html(chart_id(), "bar", "Quarterly revenue", ["Q1", "Q2", "Q3", "Q4"],
                                       [("revenue", [rng.randint(1, 9) * 10000 for _ in range(4)])]))
    write("new_chart1.html", chart_html(chart_id(), "line", "Average price", MONTHS,
                                        [("price", [rng.randint(300, 900) for _ in MONTHS])]))
    write("new_chart2.html", chart_html(chart_id(), "funnel", "Order funnel", [],
                                        [("orders", [{"name": s, "value": v} for s, v in [("visits", 100), ("carts", 40), ("orders", 12)]])]))
    write("empty_chart.html", "  \n\t\n")
    write("no_container.html", "<!DOCTYPE html>\n<html>\n<body>\n<p>no chart here</p>\n</body>\n</html>\n")

    # tables
    def top_table(name, key, header3):
        data = [[k, rng.randint(100, 5000), rng.randint(10000, 900000), round(rng.uniform(-0.3, 0.6), 3)] for k in key]
        data.sort(key=lambda r: r[2], reverse=True)
        write_csv(name, [header3, "units", "revenue", "growth"], data[:10])

    top_table("top_10_sales.csv", PRODUCTS, "product")
    top_table("top_10_products.csv", PRODUCTS[::-1], "product")
    top_table("top_10_regions.csv", REGIONS, "region")
    top_table("new_table.csv", REGIONS[::-1], "region")
    write_csv("indexed_table.csv", ["region", "units", "revenue"],
              [[r, rng.randint(1, 99), rng.randint(100, 999)] for r in REGIONS[:10]], index=True)
    write_csv("short_table.csv", ["region", "units", "revenue"],
              [[r, rng.randint(1, 99), rng.randint(100, 999)] for r in REGIONS[:5]])
    write("ragged_table.csv", "region,units,revenue\nNorth,1,2\nSouth,3\nEast,4,5\n")
    write("quoted_table.csv", 'name,note,amount\n"Smith, J","said ""hi""",10\n"Lee","multi\nline",20\n')

    # metrics
    metrics = [
        {"Indicator": "Beijing GDP Total", "Value": "20000", "Unit": "ten thousand yuan"},
        {"Indicator": "Shanghai GDP Total", "Value": "21500", "Unit": "ten thousand yuan"},
        {"Indicator": "Average Growth", "Value": "5.2", "Unit": "%"},
        {"Indicator": "Cities Covered", "Value": "4", "Unit": "cities"},
    ]
    write("city_economic_indicators.json", json.dumps(metrics, ensure_ascii=False, indent=4))
    sales_metrics = [
        {"Indicator": "Total Revenue", "Value": str(sum(r[4] for r in rows)), "Unit": "USD"},
        {"Indicator": "Total Units", "Value": str(sum(r[3] for r in rows)), "Unit": "units"},
        {"Indicator": "Best Month", "Value": str(max(monthly)), "Unit": "USD"},
        {"Indicator": "Regions", "Value": "4", "Unit": "regions"},
    ]
    write("sales_metrics.json", json.dumps(sales_metrics, ensure_ascii=False, indent=4))
    write("empty_metrics.json", "[]")
    write("metrics_missing_unit.json", json.dumps([{"Indicator": "Total", "Value": "1"}], indent=4))

    # fully populated 3x3 config over the artifacts above
    placements = [
        ("left", 1, "metrics", "city_economic_indicators.json"),
        ("left", 2, "chart", "sales_trend.html"),
        ("left", 3, "table", "top_10_sales.csv"),
        ("middle", 1, "metrics", "sales_metrics.json"),
        ("middle", 2, "chart", "category_share.html"),
        ("middle", 3, "table", "top_10_products.csv"),
        ("right", 1, "chart", "region_bar.html"),
        ("right", 2, "table", "top_10_regions.csv"),
        ("right", 3, "chart", "units_scatter.html"),
    ]
    config = {
        "version": "1",
        "template_id": "dark",
        "title": "Q3 Sales",
        "footnote": "Source: regional sales ledger",
        "font_color": "#FFFFFF",
        "placements": [{"position": p, "order": o, "kind": k, "path": f} for p, o, k, f in placements],
    }
    write("full.dbconfig.json", json.dumps(config, ensure_ascii=False, indent=4) + "\n")


if __name__ == "__main__":
    main()
