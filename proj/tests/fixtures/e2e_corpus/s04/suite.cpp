#include <iostream>

{{PROGRAM}}

int main() {
    {
        int expected = 3;
        int actual = max_of(1, 2, 3);
        std::cout << "#CASE 0 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 9;
        int actual = max_of(9, 4, 2);
        std::cout << "#CASE 1 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = 8;
        int actual = max_of(5, 8, 5);
        std::cout << "#CASE 2 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    {
        int expected = -1;
        int actual = max_of(-3, -7, -1);
        std::cout << "#CASE 3 " << (expected == actual ? "PASS" : "FAIL")
                  << " expected=" << expected << " actual=" << actual << "\n";
    }
    return 0;
}
