# absorb the cycle into vertex 0 one neighbour at a time
# tww 2, ctww 3
0 1
0 2
0 3
0 4
0 5
0 6
