int placeholder_test_core_data;
