#!/usr/bin/env node
/** `oaspmdp-plots render --in out/walls/curves.csv --out figs/ [--smooth N]` */

import { realpathSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { CsvError } from "./csv.js";
import { DEFAULT_CHANGES, render } from "./render.js";

export function cliMain(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        smooth: { type: "string" },
        changes: { type: "string" },
      },
    });
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }

  const { positionals, values } = parsed;
  if (positionals.length !== 1 || positionals[0] !== "render") {
    console.error("usage: oaspmdp-plots render --in <curves.csv> --out <dir> " +
      "[--smooth N] [--changes e1,e2]");
    return 1;
  }
  if (!values.in || !values.out) {
    console.error("error: --in and --out are required");
    return 1;
  }

  const smooth = values.smooth === undefined ? 0 : Number(values.smooth);
  if (!Number.isInteger(smooth) || smooth < 0) {
    console.error(`error: --smooth must be a non-negative integer`);
    return 1;
  }
  let changes = DEFAULT_CHANGES;
  if (values.changes !== undefined) {
    changes = values.changes.split(",").map(Number);
    if (changes.some((c) => !Number.isInteger(c) || c < 0)) {
      console.error(`error: --changes must be comma-separated episode numbers`);
      return 1;
    }
  }

  try {
    const result = render(values.in, values.out, { smooth, changes });
    console.log(`wrote ${result.files.length} files to ${values.out}`);
    return 0;
  } catch (error) {
    if (error instanceof CsvError) {
      console.error(`error: malformed CSV: ${error.message}`);
    } else {
      console.error(`error: ${(error as Error).message}`);
    }
    return 1;
  }
}

const invokedDirectly = (() => {
  if (!process.argv[1]) return false;
  try {
    return fileURLToPath(import.meta.url) === realpathSync(process.argv[1]);
  } catch {
    return false;
  }
})();

if (invokedDirectly) {
  process.exit(cliMain(process.argv.slice(2)));
}
