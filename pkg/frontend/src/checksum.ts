/**
 * Checksum over plotted data.
 *
 * The renderer never transforms values beyond axis scaling, so the checksum
 * of what it draws must equal a checksum computed from the source CSV
 * columns.  Cells are canonicalized with JavaScript number-to-string
 * conversion (shortest round-trip form); null renders as the empty cell.
 */

import { createHash } from "node:crypto";

export type Cell = number | string | null;

export function canonicalCell(value: Cell): string {
  if (value === null) {
    return "";
  }
  return typeof value === "number" ? String(value) : value;
}

export function checksumOf(rows: Cell[][]): string {
  const canonical = rows.map((row) => row.map(canonicalCell).join(",")).join("\n");
  return "sha256:" + createHash("sha256").update(canonical, "utf8").digest("hex");
}
