import { mkdtempSync, existsSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it, vi } from "vitest";

import { runCli } from "../src/cli.js";

const FIXTURES = join(__dirname, "..", "fixtures");

function quiet<T>(fn: () => T): T {
  const errSpy = vi.spyOn(console, "error").mockImplementation(() => {});
  const outSpy = vi.spyOn(console, "log").mockImplementation(() => {});
  try {
    return fn();
  } finally {
    errSpy.mockRestore();
    outSpy.mockRestore();
  }
}

describe("command line", () => {
  it("renders a figure end to end", () => {
    const out = join(mkdtempSync(join(tmpdir(), "cli-")), "ts.svg");
    const code = quiet(() =>
      runCli(["--kind", "timeseries", "--input", join(FIXTURES, "dtc_strobe.csv"),
              "--output", out]),
    );
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("rejects missing flags with exit 2", () => {
    expect(quiet(() => runCli(["--kind", "timeseries"]))).toBe(2);
  });

  it("rejects an unknown kind with exit 2", () => {
    expect(
      quiet(() =>
        runCli(["--kind", "pie", "--input", join(FIXTURES, "dtc_strobe.csv"),
                "--output", "x.svg"]),
      ),
    ).toBe(2);
  });

  it("rejects a missing input file with exit 2", () => {
    expect(
      quiet(() =>
        runCli(["--kind", "kappa", "--input", "absent.csv", "--output", "x.svg"]),
      ),
    ).toBe(2);
  });

  it("rejects a schema mismatch with exit 2", () => {
    const dir = mkdtempSync(join(tmpdir(), "cli-"));
    const bad = join(dir, "empty.csv");
    writeFileSync(bad, "");
    expect(
      quiet(() =>
        runCli(["--kind", "kappa", "--input", bad, "--output", join(dir, "x.svg")]),
      ),
    ).toBe(2);
  });

  it("rejects an unwritable output with exit 1", () => {
    expect(
      quiet(() =>
        runCli(["--kind", "kappa", "--input", join(FIXTURES, "nm_kappa.csv"),
                "--output", "/no/such/dir/x.svg"]),
      ),
    ).toBe(1);
  });
});
