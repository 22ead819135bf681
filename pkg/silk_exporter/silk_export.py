#!/usr/bin/env python3
"""Export Django Silk profiler data as an ops-JSON file.

Run this script inside the profiled application's environment. It reads the
two tables Silk keeps in the application's database, groups requests by
(view, handler method), extracts the tables each request's SQL touched, and
maps them to model classes via an explicit table-to-model JSON file:

    python silk_export.py --db db.sqlite3 --map tables.json --out ops.json

The optional --since/--until RFC3339 flags filter requests on their
start_time column and are recorded as the window of the exported data.
Only the standard library is used, so the script can be dropped into any
project unchanged.
"""

import argparse
import json
import re
import sqlite3
import sys
from datetime import datetime

REQUEST_COLUMNS = ("id", "view_name", "path", "method")
QUERY_COLUMNS = ("query", "request_id")

TABLE_PATTERN = re.compile(
    r"\b(?:from|join)\s+(?:\"([^\"]+)\"|`([^`]+)`|([A-Za-z_][A-Za-z0-9_]*))",
    re.IGNORECASE,
)


class ExportError(Exception):
    pass


def extract_tables(sql):
    """Table names after FROM/JOIN keywords, scanned over the whole query
    so subqueries are covered too. Names compare case-insensitively."""
    tables = set()
    for match in TABLE_PATTERN.finditer(sql or ""):
        name = match.group(1) or match.group(2) or match.group(3)
        tables.add(name.lower())
    return tables


def parse_rfc3339(value, flag):
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise ExportError("%s expects an RFC3339 timestamp, got %r" % (flag, value))


def load_table_map(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ExportError("cannot read mapping file: %s" % exc)
    except json.JSONDecodeError as exc:
        raise ExportError("mapping file is not valid JSON: %s" % exc)
    if not isinstance(raw, dict):
        raise ExportError("mapping file must be a JSON object")
    table_map = {}
    for table, model in raw.items():
        if not isinstance(model, str) or not all(
            part.isidentifier() for part in model.split(".")
        ):
            raise ExportError("mapping for %r is not a dotted model path" % table)
        key = table.lower()
        if key in table_map:
            raise ExportError("duplicate table mapping for %r" % table)
        table_map[key] = model
    return table_map


def check_columns(conn, table, required):
    rows = conn.execute("PRAGMA table_info(%s)" % table).fetchall()
    if not rows:
        raise ExportError("table %s not found in the database" % table)
    present = {row[1] for row in rows}
    missing = [c for c in required if c not in present]
    if missing:
        raise ExportError(
            "table %s is missing expected columns: %s" % (table, ", ".join(missing))
        )
    return present


def export(db_path, map_path, out_path, since=None, until=None):
    """Build and write the ops-JSON document; returns warning messages."""
    table_map = load_table_map(map_path)
    try:
        conn = sqlite3.connect("file:%s?mode=ro" % db_path, uri=True)
    except sqlite3.Error as exc:
        raise ExportError("cannot open database %s: %s" % (db_path, exc))
    warnings = []
    try:
        request_columns = check_columns(conn, "silk_request", REQUEST_COLUMNS)
        check_columns(conn, "silk_sqlquery", QUERY_COLUMNS)
        if (since or until) and "start_time" not in request_columns:
            raise ExportError(
                "--since/--until need a start_time column on silk_request"
            )

        with_time = "start_time" in request_columns
        columns = "id, view_name, method" + (", start_time" if with_time else "")
        rows = conn.execute(
            "SELECT %s FROM silk_request ORDER BY id" % columns
        ).fetchall()

        queries_by_request = {}
        for query, request_id in conn.execute(
            "SELECT query, request_id FROM silk_sqlquery ORDER BY rowid"
        ):
            queries_by_request.setdefault(request_id, []).append(query)
    finally:
        conn.close()

    groups = {}
    unmapped = set()
    for row in rows:
        request_id, view_name, method = row[0], row[1], row[2]
        if with_time and (since or until):
            started = parse_rfc3339(row[3], "silk_request.start_time")
            if since and started < since:
                continue
            if until and started > until:
                continue
        if not view_name or not method:
            warnings.append("request %r has no view/method; skipped" % request_id)
            continue
        entry = groups.setdefault((view_name, method), [0, set()])
        entry[0] += 1
        for query in queries_by_request.get(request_id, []):
            for table in sorted(extract_tables(query)):
                model = table_map.get(table)
                if model is None:
                    unmapped.add(table)
                else:
                    entry[1].add(model)

    for table in sorted(unmapped):
        warnings.append("no model mapping for table %r; skipped" % table)

    requests = []
    for (view_name, method), (calls, models) in sorted(groups.items()):
        if calls > 0 and not models:
            warnings.append(
                "request group %s.%s touched no mapped tables; skipped"
                % (view_name, method)
            )
            continue
        requests.append(
            {
                "view": view_name,
                "method": method,
                "calls": calls,
                "models": sorted(models),
            }
        )

    document = {}
    if since and until:
        document["window"] = {
            "start": since.isoformat().replace("+00:00", "Z"),
            "end": until.isoformat().replace("+00:00", "Z"),
        }
    document["requests"] = requests
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")
    return warnings


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Export Silk profiler tables as ops-JSON."
    )
    parser.add_argument("--db", required=True, help="SQLite database with Silk tables")
    parser.add_argument("--map", required=True, help="JSON file mapping tables to models")
    parser.add_argument("--out", required=True, help="where to write the ops-JSON")
    parser.add_argument("--since", help="keep requests starting at or after this time")
    parser.add_argument("--until", help="keep requests starting at or before this time")
    args = parser.parse_args(argv)
    try:
        since = parse_rfc3339(args.since, "--since") if args.since else None
        until = parse_rfc3339(args.until, "--until") if args.until else None
        warnings = export(args.db, args.map, args.out, since=since, until=until)
    except ExportError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    for message in warnings:
        print("warning: %s" % message, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
