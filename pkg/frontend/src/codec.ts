// Cell layout for the grid-of-grids view.
//
// A point of F_q^m is the integer sum of digit_j * q^j with coordinate 0
// least significant (the server's encoding).  The display splits the first
// four coordinates as:
//
//   coordinate 0 -> inner grid column      coordinate 2 -> outer grid column
//   coordinate 1 -> inner grid row         coordinate 3 -> outer grid row
//
// so m = 2 is the familiar q x q square and m = 4 is a q x q array of
// q x q squares.  Boards with m > 4 have no geometric layout here.

export interface Cell {
  innerX: number;
  innerY: number;
  outerX: number;
  outerY: number;
}

export interface Layout {
  q: number;
  m: number;
  innerCols: number;
  innerRows: number;
  outerCols: number;
  outerRows: number;
}

export const MAX_GEOMETRIC_M = 4;

export function boardLayout(q: number, m: number): Layout {
  if (m < 1 || m > MAX_GEOMETRIC_M) {
    throw new Error(`no geometric layout for m = ${m}`);
  }
  return {
    q,
    m,
    innerCols: q,
    innerRows: m >= 2 ? q : 1,
    outerCols: m >= 3 ? q : 1,
    outerRows: m >= 4 ? q : 1,
  };
}

export function pointToCell(layout: Layout, point: number): Cell {
  const { q, m } = layout;
  const size = q ** m;
  if (!Number.isInteger(point) || point < 0 || point >= size) {
    throw new Error(`point ${point} outside [0, ${size})`);
  }
  const d0 = point % q;
  const d1 = Math.floor(point / q) % q;
  const d2 = Math.floor(point / (q * q)) % q;
  const d3 = Math.floor(point / (q * q * q)) % q;
  return {
    innerX: d0,
    innerY: m >= 2 ? d1 : 0,
    outerX: m >= 3 ? d2 : 0,
    outerY: m >= 4 ? d3 : 0,
  };
}

export function cellToPoint(layout: Layout, cell: Cell): number {
  const { q } = layout;
  checkRange(cell.innerX, layout.innerCols, "innerX");
  checkRange(cell.innerY, layout.innerRows, "innerY");
  checkRange(cell.outerX, layout.outerCols, "outerX");
  checkRange(cell.outerY, layout.outerRows, "outerY");
  return cell.innerX + q * cell.innerY + q * q * cell.outerX + q * q * q * cell.outerY;
}

function checkRange(v: number, bound: number, name: string): void {
  if (!Number.isInteger(v) || v < 0 || v >= bound) {
    throw new Error(`${name} = ${v} outside [0, ${bound})`);
  }
}
