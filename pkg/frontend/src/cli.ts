#!/usr/bin/env node
/**
 * plots render --kind <kind> --in <csv> --out <svg>
 *
 * Renders one figure from a runner CSV artifact. Exit codes: 0 success,
 * 2 unreadable input or schema mismatch.
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { CsvError } from "./csv.js";
import { SchemaError } from "./manifest.js";
import { PLOT_KINDS, renderToFile } from "./render.js";
import type { PlotKind } from "./manifest.js";

export function main(argv: string[]): void {
  yargs(argv)
    .command(
      "render",
      "render a figure from a CSV artifact",
      (cmd) =>
        cmd
          .option("kind", {
            choices: PLOT_KINDS,
            demandOption: true,
            describe: "plot kind",
          })
          .option("in", {
            type: "string",
            demandOption: true,
            describe: "input CSV path",
          })
          .option("out", {
            type: "string",
            demandOption: true,
            describe: "output SVG path",
          })
          .option("log", {
            type: "boolean",
            default: false,
            describe: "log-scale the y axis (decay curves)",
          })
          .option("title", { type: "string", describe: "figure title" }),
      (args) => {
        try {
          renderToFile(args.kind as PlotKind, args.in as string, args.out as string, {
            logY: args.log as boolean,
            title: args.title as string | undefined,
          });
        } catch (err) {
          if (err instanceof SchemaError || err instanceof CsvError) {
            console.error(`error: ${err.message}`);
            process.exit(2);
          }
          throw err;
        }
      },
    )
    .demandCommand(1)
    .strict()
    .parseSync();
}

main(hideBin(process.argv));
