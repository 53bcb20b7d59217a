#pragma once

// Prompt templates for the two board types. Placeholders: $INCONTEXT_SAMPLES,
// $TEST_INSTRUCTION, and for regular boards $COMBO_LINE.

namespace gridbench::protocol::templates {

inline constexpr const char* kSimple =
    R"(System Info

You are a helpful assistant who is designed to interpret and translate natural language instructions into python executable code snippets.

Environment Info

The environment is an 8x8 grid allowing shape placement and stacking. A shape can be placed in any cell, while stacking involves adding multiple shapes to the same cell, increasing its depth. Shapes typically occupy a single cell, except for the "bridge," which spans two cells and requires two other shapes for stacking. Horizontal bridges span adjacent columns (left and right), and vertical ones span consecutive rows (top and bottom). Stacking is only possible if the shapes have matching depths.

In the grid, columns align with the x-axis and rows with the y-axis. Python indexing is used to identify each cell. The cell in the top-left corner is in the first row and first column, corresponding to x and y values of 0, 0. Similarly, the top-right corner cell is in the first row and eighth column, with x and y values of 0, 7.
- Use the shape name 'bridge-h' if a bridge is placed horizontally
- Use the shape name 'bridge-v' if a bridge is placed vertically

The following functions are already defined; therefore, do not generate additional code for it
- Use `put(board: np.ndarray, shape: string, color: string, x: int, y: int) to place a shape on the board

Task Info

For each instruction labeled Instruction: please respond with code under the label Function: followed by a newline and usage for the function under the label Usage: followed by a newline.

Context Info

$INCONTEXT_SAMPLES

Other Info

Do not generate any other text/explanations.

The order of colors, x, y matters, as these are assigned to the shapes in the same sequence.
Ensure the response can be executed by Python `exec()`, e.g.: no trailing commas, no periods, etc.
Let's begin

Instruction:
$TEST_INSTRUCTION)";

inline constexpr const char* kRegular =
    R"(System Info

You are a helpful assistant who is designed to interpret and translate natural language instructions into python executable code snippets.

Environment Info

The environment is an 8x8 grid allowing shape placement and stacking. A shape can be placed in any cell, while stacking involves adding multiple shapes to the same cell, increasing its depth. Shapes typically occupy a single cell, except for the "bridge," which spans two cells and requires two other shapes for stacking. Horizontal bridges span adjacent columns (left and right), and vertical ones span consecutive rows (top and bottom). Stacking is only possible if the shapes have matching depths.

In the grid, columns align with the x-axis and rows with the y-axis. Python indexing is used to identify each cell. The cell in the top-left corner is in the first row and first column, corresponding to x and y values of 0, 0. Similarly, the top-right corner cell is in the first row and eighth column, with x and y values of 0, 7.

- Use the shape name 'bridge-h' if a bridge is placed horizontally
- Use the shape name 'bridge-v' if a bridge is placed vertically

The following functions are already defined; therefore, do not generate additional code for it
- Use `put(board: np.ndarray, shape: string, color: string, x: int, y: int)` to place a shape on the board
$COMBO_LINE

Task Info

For each instruction labeled Instruction: please respond with code under the label Output: followed by a newline.

Context Info

$INCONTEXT_SAMPLES

Other Info

Do not generate any other text/explanations.

The order of colors, x, y matters, as these are assigned to the shapes in the same sequence.
Ensure the response can be executed by Python `exec()`, e.g.: no trailing commas, no periods, etc.
Lets begin

Instruction:
$TEST_INSTRUCTION)";

inline constexpr const char* kComboLine =
    "- Use `$COMBO_NAME(board: np.ndarray, colors: $COLORS, x: int, y: int)` to place a "
    "'$COMBO_NAME' object on the board";

}  // namespace gridbench::protocol::templates
