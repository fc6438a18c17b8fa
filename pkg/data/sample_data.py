# Desk-scale datasets, column name -> values in case order. `id` holds case identifiers.

# Crisp already (threshold 1 everywhere). Conservative X1*X2*~X3 + ~X1*X2*X3, parsimonious X2.
D0 = {
    'id': ['A', 'B', 'C', 'D', 'E'],
    'X1': [1, 1, 0, 0, 1],
    'X2': [1, 1, 1, 0, 0],
    'X3': [0, 0, 1, 0, 1],
    'Y': [1, 1, 1, 0, 0],
}

# Raw 1-3 scores; with A=2, B=2 the outcome sweep narrows from A + B (thrY=2) to A*B (thrY=3).
D1 = {
    'id': ['c1', 'c2', 'c3', 'c4', 'c5', 'c6'],
    'A': [3, 3, 1, 1, 3, 3],
    'B': [3, 1, 2, 1, 3, 1],
    'Y': [3, 2, 2, 1, 3, 2],
}

SAMPLE_DATA = {
    'd0': D0,
    'd1': D1,
}
