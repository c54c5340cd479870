/**
 * Renders all four figures from the repository's completed default run
 * (.acceptance/out, produced by the Python acceptance suite). Skipped
 * when that run is absent.
 */
import { existsSync, readFileSync } from "fs";
import { mkdtempSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";
import { render } from "../src/render";
import type { FigureId } from "../src/figure";

const FULL_RUN = join(__dirname, "..", "..", ".acceptance", "out");
const ready =
  existsSync(join(FULL_RUN, "bounds.csv")) &&
  existsSync(join(FULL_RUN, "analysis", "tier_matrix.csv"));

describe.skipIf(!ready)("full default run", () => {
  const out = ready ? mkdtempSync(join(tmpdir(), "fullrun-")) : "";
  for (const id of ["scaling", "motif", "seeds", "tiers"] as FigureId[]) {
    it(`renders ${id} from the acceptance grid`, () => {
      const figure = render({ id, dataDir: FULL_RUN, output: join(out, `${id}.svg`) });
      const svg = readFileSync(join(out, `${id}.svg`), "utf8");
      expect(svg.startsWith("<svg")).toBe(true);
      if (id !== "motif") {
        expect(figure.points.length).toBeGreaterThan(50);
      }
    });
  }
});
