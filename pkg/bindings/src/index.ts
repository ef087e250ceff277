/**
 * Node bindings for the morphtok labeller.
 *
 * The binding drives the `morphtok label` CLI over stdin/stdout, so it only
 * depends on the toolkit's external interfaces: the lexicon snapshot, the
 * vocabulary file, and the JSONL row format. A BoundLabeller is immutable
 * after construction and safe to share; batch calls run asynchronously in a
 * child process, so they never block the event loop.
 */

import { spawn } from "node:child_process";
import { accessSync, constants } from "node:fs";

export type MarkerScheme =
  | "sentencepiece-underline"
  | "byte-level-prefix"
  | "wordpiece-continuation"
  | "plain";

export type LabelValue = "vocab" | "morph" | "alien" | "na";

export interface LabelResult {
  label: LabelValue;
  mu: number | null;
}

export interface LabelledRow extends LabelResult {
  word: string;
  subwords: string[];
}

export interface BatchRow {
  word: string;
  subwords: string[];
}

export interface BoundLabellerOptions {
  lexiconPath: string;
  vocabPath: string;
  /** Marker scheme of input subwords (default: plain, i.e. canonical). */
  scheme?: MarkerScheme;
  /** Marker scheme of the vocabulary file (default: plain). */
  vocabScheme?: MarkerScheme;
  /** Vocabulary file format (default: token-per-line). */
  vocabFormat?: "token-per-line" | "tokenizer-json";
  /**
   * Command used to invoke the CLI. Defaults to $MORPHTOK_CLI or
   * "morphtok"; may contain arguments ("python3 -m morphtok.cli").
   */
  cliCommand?: string;
}

/**
 * Canonical serialization of a labelled row: sorted keys, compact
 * separators, raw UTF-8. Byte-identical to the CLI's own output lines.
 */
export function canonicalSerialize(row: LabelledRow): string {
  return JSON.stringify({
    label: row.label,
    mu: row.mu,
    subwords: row.subwords,
    word: row.word,
  });
}

function validateRow(row: BatchRow, index: number): void {
  if (typeof row.word !== "string" || row.word.length === 0) {
    throw new Error(`row ${index}: word must be a non-empty string`);
  }
  if (
    !Array.isArray(row.subwords) ||
    row.subwords.length === 0 ||
    row.subwords.some((s) => typeof s !== "string" || s.length === 0)
  ) {
    throw new Error(`row ${index}: subwords must be non-empty strings`);
  }
}

export class BoundLabeller {
  private readonly argv: string[];
  readonly options: Required<Omit<BoundLabellerOptions, "cliCommand">> & {
    cliCommand: string;
  };

  constructor(opts: BoundLabellerOptions) {
    const cliCommand =
      opts.cliCommand ?? process.env.MORPHTOK_CLI ?? "morphtok";
    this.options = {
      lexiconPath: opts.lexiconPath,
      vocabPath: opts.vocabPath,
      scheme: opts.scheme ?? "plain",
      vocabScheme: opts.vocabScheme ?? "plain",
      vocabFormat: opts.vocabFormat ?? "token-per-line",
      cliCommand,
    };
    accessSync(this.options.lexiconPath, constants.R_OK);
    accessSync(this.options.vocabPath, constants.R_OK);
    this.argv = [
      ...cliCommand.split(" "),
      "label",
      "--lexicon", this.options.lexiconPath,
      "--vocab", this.options.vocabPath,
      "--vocab-format", this.options.vocabFormat,
      "--vocab-scheme", this.options.vocabScheme,
      "--scheme", this.options.scheme,
      "--in", "-",
      "--out", "-",
    ];
  }

  /** Construct and verify the resources actually load (CLI dry run). */
  static async create(opts: BoundLabellerOptions): Promise<BoundLabeller> {
    const labeller = new BoundLabeller(opts);
    await labeller.runCli("");
    return labeller;
  }

  private runCli(stdin: string): Promise<string> {
    const [cmd, ...args] = this.argv;
    return new Promise((resolve, reject) => {
      const child = spawn(cmd, args, { stdio: ["pipe", "pipe", "pipe"] });
      const out: Buffer[] = [];
      const err: Buffer[] = [];
      child.stdout.on("data", (d) => out.push(d));
      child.stderr.on("data", (d) => err.push(d));
      child.on("error", reject);
      child.on("close", (code) => {
        if (code === 0) {
          resolve(Buffer.concat(out).toString("utf-8"));
        } else {
          reject(
            new Error(
              `morphtok label exited with ${code}: ` +
                Buffer.concat(err).toString("utf-8").trim().split("\n").pop(),
            ),
          );
        }
      });
      child.stdin.write(stdin, "utf-8");
      child.stdin.end();
    });
  }

  /** Label one word's subword sequence. */
  async labelWord(word: string, subwords: string[]): Promise<LabelResult> {
    const [row] = await this.labelBatch([{ word, subwords }]);
    return { label: row.label, mu: row.mu };
  }

  /**
   * Label many rows, preserving order. The first malformed row aborts
   * with its index in the message before anything is spawned.
   */
  async labelBatch(rows: Iterable<BatchRow>): Promise<LabelledRow[]> {
    const materialized = [...rows];
    materialized.forEach(validateRow);
    if (materialized.length === 0) {
      return [];
    }
    const stdin = materialized
      .map((r) => JSON.stringify({ word: r.word, subwords: r.subwords }) + "\n")
      .join("");
    const stdout = await this.runCli(stdin);
    const lines = stdout.split("\n").filter((l) => l.length > 0);
    if (lines.length !== materialized.length) {
      throw new Error(
        `expected ${materialized.length} result rows, got ${lines.length}`,
      );
    }
    return lines.map((l) => JSON.parse(l) as LabelledRow);
  }
}
