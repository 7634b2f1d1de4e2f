// Writes the golden request-body fixtures. Run once and commit; the
// tests compare live serialization to these files byte-for-byte, and the
// service-side suite posts them to a real engine to prove acceptance.

import { mkdirSync, writeFileSync } from "node:fs";

import { chipsToQuery, type Chip } from "../src/concepts";
import {
  canonicalQueryBody,
  feedbackBody,
  positiveBody,
  submitBody,
} from "../src/serialize";
import { CanvasSketch } from "../src/sketch";

mkdirSync("tests/fixtures", { recursive: true });

function write(name: string, content: string) {
  writeFileSync(`tests/fixtures/${name}`, content);
  console.log(`${name}: ${content.length} bytes`);
}

// one red cell at the top-left canvas cell
const single = new CanvasSketch();
single.place(0, 0, [255, 0, 0]);
write("query_sketch_red_cell.json", canonicalQueryBody({ sketch: single.toWire() }));

// three cells across the canvas
const three = new CanvasSketch();
three.place(0, 0, [255, 0, 0]);
three.place(4, 3, [0, 255, 0]);
three.place(7, 7, [0, 0, 255]);
write("query_sketch_three_cells.json", canonicalQueryBody({ sketch: three.toWire() }));

// builder chips: [person(w2)] AND [NOT indoor]
const chips: Chip[] = [
  { label: "person", bank: "concept", weight: 2, negated: false, connective: "AND" },
  { label: "indoor", bank: "concept", weight: 1, negated: true, connective: "AND" },
];
write(
  "query_concept_chips.json",
  canonicalQueryBody({ concept: chipsToQuery(chips) }),
);

// everything at once, with custom weights, flags, and limit
const full = new CanvasSketch();
full.level = "shot";
full.place(2, 5, [10, 200, 120]);
write(
  "query_full.json",
  canonicalQueryBody({
    sketch: full.toWire(),
    text: {
      text: "red car at night",
      field_weights: { description: 1, speech: 2, ocr: 0 },
    },
    concept: "person:2 AND (obj/dog OR (NOT indoor))",
    modalityWeights: { sketch: 1.5, text: 1, concept: 0.5 },
    dropBlackAndWhite: true,
    dropBlackBordered: true,
    limit: 200,
  }),
);

write("positive.json", positiveBody("v00_s03"));
write("feedback.json", feedbackBody(0.5));
write("submit.json", submitBody("v00_s03"));
